#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neurotrade/pipeline.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_stages(const nt::RunConfig& cfg, void (*stage)(const nt::RunConfig&, const std::string&),
               const char* name) {
    bool any_failed = false;
    for (const auto& ticker : cfg.tickers) {
        try {
            stage(cfg, ticker);
            std::cout << name << " " << ticker << ": ok\n";
        } catch (const std::exception& e) {
            std::cerr << name << " " << ticker << ": " << e.what() << "\n";
            any_failed = true;
        }
    }
    return any_failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"neurotrade - indicator-driven MLP trading pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string tickers_csv;
    std::string out_dir;
    std::string data_dir;
    int parallelism = 0;
    long long seed = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration JSON file")->required();
        sub->add_option("--tickers", tickers_csv, "comma-separated ticker override");
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--data-dir", data_dir, "input data directory override");
        sub->add_option("--parallelism", parallelism, "worker pool size override");
        sub->add_option("--seed", seed, "MLP seed override");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "run all phases end to end");
    CLI::App* cmd_ingest = app.add_subcommand("ingest", "parse and adjust raw CSVs");
    CLI::App* cmd_prepare = app.add_subcommand("prepare", "label, split, normalize, resample");
    CLI::App* cmd_train = app.add_subcommand("train", "train the MLP on the prepared dataset");
    CLI::App* cmd_backtest = app.add_subcommand("backtest", "predict and simulate trading");
    CLI::App* cmd_evaluate = app.add_subcommand("evaluate", "compute metrics and reports");
    for (CLI::App* sub : {cmd_run, cmd_ingest, cmd_prepare, cmd_train, cmd_backtest, cmd_evaluate})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    nt::RunConfig cfg;
    try {
        cfg = nt::load_run_config(config_path);
        if (!tickers_csv.empty()) cfg.tickers = split_list(tickers_csv);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!data_dir.empty()) cfg.data_dir = data_dir;
        if (const char* env = std::getenv("NEUROTRADE_DATA_DIR"); env && data_dir.empty())
            cfg.data_dir = env;
        if (parallelism > 0) cfg.parallelism = parallelism;
        if (seed >= 0) cfg.mlp.seed = static_cast<std::uint64_t>(seed);
        if (cfg.tickers.empty())
            throw nt::Error(nt::Errc::ConfigInvalid, "no tickers configured");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_run->parsed()) {
            const nt::PipelineResult result = nt::run_pipeline(cfg);
            for (const auto& t : result.tickers) {
                const char* status = t.status == nt::TickerStatus::Ok        ? "ok"
                                     : t.status == nt::TickerStatus::Skipped ? "skipped"
                                                                             : "failed";
                std::cout << t.ticker << ": " << status;
                if (!t.message.empty()) std::cout << " (" << t.message << ")";
                std::cout << "\n";
            }
            std::cout << "report: " << nt::report_csv_path(cfg).string() << "\n";
            return result.any_failed ? 1 : 0;
        }
        if (cmd_ingest->parsed()) return run_stages(cfg, nt::stage_ingest, "ingest");
        if (cmd_prepare->parsed()) return run_stages(cfg, nt::stage_prepare, "prepare");
        if (cmd_train->parsed()) return run_stages(cfg, nt::stage_train, "train");
        if (cmd_backtest->parsed()) return run_stages(cfg, nt::stage_backtest, "backtest");
        if (cmd_evaluate->parsed()) return run_stages(cfg, nt::stage_evaluate, "evaluate");
    } catch (const nt::Error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == nt::Errc::ConfigInvalid ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
