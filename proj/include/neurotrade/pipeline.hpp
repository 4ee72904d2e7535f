#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "neurotrade/backtest.hpp"
#include "neurotrade/dataset.hpp"
#include "neurotrade/indicators.hpp"
#include "neurotrade/metrics.hpp"
#include "neurotrade/neuralnet.hpp"

namespace nt {

struct RunConfig {
    std::filesystem::path data_dir;
    std::vector<std::string> tickers;
    IndicatorConfig indicator;
    LabelerConfig labeler;
    SplitSpec split{{1997, 1, 1}, {2006, 12, 31}, {2007, 1, 1}, {2017, 1, 1}};
    MlpConfig mlp;
    TradingConfig trading;
    std::filesystem::path output_dir = "out";
    int parallelism = 1;
};

RunConfig load_run_config(const std::filesystem::path& path);

// Canonical single-line JSON of the fully resolved config; embedded as a
// provenance header in every report.
std::string config_json(const RunConfig& cfg);

// Per-phase stage functions. Each reads the previous stage's on-disk artifact
// and writes its own, so running the subcommands in sequence produces exactly
// the files run_pipeline produces.
void stage_ingest(const RunConfig& cfg, const std::string& ticker);
void stage_prepare(const RunConfig& cfg, const std::string& ticker);
void stage_train(const RunConfig& cfg, const std::string& ticker);
void stage_backtest(const RunConfig& cfg, const std::string& ticker);
void stage_evaluate(const RunConfig& cfg, const std::string& ticker);

enum class TickerStatus { Ok, Skipped, Failed };

struct TickerResult {
    std::string ticker;
    TickerStatus status = TickerStatus::Failed;
    std::string message; // failure/skip reason
    TradingStats stats;
    ClassScores class_scores;
    ConfusionMatrix matrix;
};

struct PipelineResult {
    std::vector<TickerResult> tickers; // fixed input order
    bool any_failed = false;
    bool any_succeeded = false;
};

// Runs all stages for every ticker across a bounded worker pool, then writes
// the aggregate report. Per-ticker failures are recorded, not fatal.
PipelineResult run_pipeline(const RunConfig& cfg);

// Artifact paths (all under cfg.output_dir).
std::filesystem::path adjusted_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path train_set_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path test_set_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path normalizer_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path model_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path trace_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path predictions_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path trades_csv_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path trades_log_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path metrics_path(const RunConfig& cfg, const std::string& ticker);
std::filesystem::path report_csv_path(const RunConfig& cfg);
std::filesystem::path report_table_path(const RunConfig& cfg);

} // namespace nt
