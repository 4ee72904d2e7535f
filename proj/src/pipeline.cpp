#include "neurotrade/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <iterator>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace nt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Error(Errc::MissingUpstreamArtifact, p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error(Errc::ConfigInvalid, "cannot write " + p.string());
    out << content;
}

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string dataset_csv(const std::vector<LabeledSample>& samples) {
    std::ostringstream out;
    out << "Date,f1,f2,f3,f4,Label,RawClose\n";
    for (const auto& s : samples) {
        out << s.date.str();
        for (double f : s.features) out << ',' << fmt(f);
        out << ',' << static_cast<int>(s.label) << ',' << fmt(s.raw_close) << '\n';
    }
    return out.str();
}

std::vector<LabeledSample> parse_dataset_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "Date,f1,f2,f3,f4,Label,RawClose")
        throw Error(Errc::MalformedHeader, "dataset CSV");
    std::vector<LabeledSample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        LabeledSample s;
        std::getline(row, field, ',');
        s.date = Date::parse(field);
        for (int i = 0; i < 4; ++i) {
            std::getline(row, field, ',');
            s.features[i] = std::stod(field);
        }
        std::getline(row, field, ',');
        const int code = std::stoi(field);
        if (code < 0 || code > 2)
            throw Error(Errc::MalformedRow, "label code " + field);
        s.label = static_cast<Label>(code);
        std::getline(row, field, ',');
        s.raw_close = std::stod(field);
        samples.push_back(s);
    }
    return samples;
}

Date json_date(const json& j) { return Date::parse(j.get<std::string>()); }

std::vector<PricePoint> price_series(const std::vector<LabeledSample>& samples) {
    std::vector<PricePoint> prices;
    prices.reserve(samples.size());
    for (const auto& s : samples) prices.emplace_back(s.date, s.raw_close);
    return prices;
}

double span_years(const std::vector<LabeledSample>& samples) {
    return static_cast<double>(samples.back().date.serial() - samples.front().date.serial()) /
           365.25;
}

struct Evaluation {
    ConfusionMatrix matrix;
    ClassScores class_scores;
    TradingStats stats;
};

Evaluation evaluate_ticker(const RunConfig& cfg, const std::string& ticker) {
    const auto test = parse_dataset_csv(read_file(test_set_path(cfg, ticker)));
    if (test.size() < 2)
        throw Error(Errc::SeriesTooShort, ticker + ": test set too small");

    // predictions artifact: Date,Actual,Predicted
    std::istringstream pred_in(read_file(predictions_path(cfg, ticker)));
    std::string line;
    if (!std::getline(pred_in, line) || line != "Date,Actual,Predicted")
        throw Error(Errc::MalformedHeader, "predictions CSV");
    std::vector<Label> actual, predicted;
    while (std::getline(pred_in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        std::getline(row, field, ',');
        actual.push_back(static_cast<Label>(std::stoi(field)));
        std::getline(row, field, ',');
        predicted.push_back(static_cast<Label>(std::stoi(field)));
    }
    if (actual.size() != test.size())
        throw Error(Errc::LengthMismatch, "predictions do not align with test set");

    Evaluation ev;
    ev.matrix = confusion(actual, predicted);
    ev.class_scores = scores(ev.matrix);

    const auto prices = price_series(test);
    const Ledger ours = simulate(prices, predicted, cfg.trading);
    const Ledger bah = buy_and_hold(prices, cfg.trading);
    ev.stats = trading_stats(ours, bah, span_years(test));
    return ev;
}

std::string metrics_csv(const RunConfig& cfg, const Evaluation& ev) {
    std::ostringstream out;
    out << "# config " << config_json(cfg) << "\n";
    out << "key,value\n";
    auto kv = [&](const std::string& k, double v) { out << k << ',' << fmt(v) << '\n'; };
    kv("final_capital", ev.stats.final_capital);
    kv("bah_final_capital", ev.stats.bah_final_capital);
    kv("annualized_return", ev.stats.annualized_return);
    kv("bah_annualized_return", ev.stats.bah_annualized_return);
    kv("annualized_return_cagr", ev.stats.annualized_return_cagr);
    kv("bah_annualized_return_cagr", ev.stats.bah_annualized_return_cagr);
    kv("annualized_transactions", ev.stats.annualized_transactions);
    kv("percent_success", ev.stats.percent_success);
    kv("avg_profit_per_transaction_pct", ev.stats.avg_profit_per_transaction_pct);
    kv("avg_transaction_length_bars", ev.stats.avg_transaction_length_bars);
    kv("max_profit_pct", ev.stats.max_profit_pct);
    kv("max_loss_pct", ev.stats.max_loss_pct);
    kv("max_capital", ev.stats.max_capital);
    kv("no_trades", ev.stats.no_trades ? 1 : 0);
    kv("accuracy", ev.class_scores.accuracy);
    for (int c = 0; c < 3; ++c) {
        kv("precision_" + std::to_string(c), ev.class_scores.precision[c]);
        kv("recall_" + std::to_string(c), ev.class_scores.recall[c]);
        kv("f1_" + std::to_string(c), ev.class_scores.f1[c]);
    }
    for (int a = 0; a < 3; ++a)
        for (int p = 0; p < 3; ++p)
            kv("confusion_" + std::to_string(a) + std::to_string(p),
               static_cast<double>(ev.matrix.counts[a][p]));
    return out.str();
}

void write_aggregate_report(const RunConfig& cfg, const PipelineResult& result) {
    static const char* columns[] = {"OUR", "BaH", "OURr",  "BaHr", "AnT", "PoS",
                                    "ApT", "L",   "MpT",   "MlT",  "MxC", "OURr_cagr",
                                    "BaHr_cagr"};
    auto row_values = [](const TradingStats& s) {
        return std::vector<double>{s.final_capital,
                                   s.bah_final_capital,
                                   100.0 * s.annualized_return,
                                   100.0 * s.bah_annualized_return,
                                   s.annualized_transactions,
                                   s.percent_success,
                                   s.avg_profit_per_transaction_pct,
                                   s.avg_transaction_length_bars,
                                   s.max_profit_pct,
                                   s.max_loss_pct,
                                   s.max_capital,
                                   100.0 * s.annualized_return_cagr,
                                   100.0 * s.bah_annualized_return_cagr};
    };
    constexpr std::size_t n_cols = std::size(columns);

    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::vector<double> sums(n_cols, 0.0);
    for (const auto& t : result.tickers) {
        if (t.status != TickerStatus::Ok) continue;
        rows.emplace_back(t.ticker, row_values(t.stats));
        for (std::size_t i = 0; i < n_cols; ++i) sums[i] += rows.back().second[i];
    }
    if (!rows.empty())
        for (auto& s : sums) s /= static_cast<double>(rows.size());

    std::ostringstream csv;
    csv << "# config " << config_json(cfg) << "\n";
    csv << "Share";
    for (const char* c : columns) csv << ',' << c;
    csv << '\n';
    auto emit_row = [&](std::ostringstream& out, const std::string& name,
                        const std::vector<double>& vals) {
        out << name;
        for (double v : vals) out << ',' << fmt(v, "%.2f");
        out << '\n';
    };
    for (const auto& [name, vals] : rows) emit_row(csv, name, vals);
    if (!rows.empty()) emit_row(csv, "AVERAGE", sums);
    for (const auto& t : result.tickers)
        if (t.status == TickerStatus::Skipped)
            csv << "# skipped " << t.ticker << ": " << t.message << '\n';
        else if (t.status == TickerStatus::Failed)
            csv << "# failed " << t.ticker << ": " << t.message << '\n';
    write_file(report_csv_path(cfg), csv.str());

    std::ostringstream table;
    table << "# config " << config_json(cfg) << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-8s", "Share");
    table << buf;
    for (const char* c : columns) {
        std::snprintf(buf, sizeof(buf), "%12s", c);
        table << buf;
    }
    table << '\n';
    auto emit_table_row = [&](const std::string& name, const std::vector<double>& vals) {
        std::snprintf(buf, sizeof(buf), "%-8s", name.c_str());
        table << buf;
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), "%12.2f", v);
            table << buf;
        }
        table << '\n';
    };
    for (const auto& [name, vals] : rows) emit_table_row(name, vals);
    if (!rows.empty()) emit_table_row("AVERAGE", sums);
    for (const auto& t : result.tickers)
        if (t.status != TickerStatus::Ok)
            table << (t.status == TickerStatus::Skipped ? "skipped " : "failed ") << t.ticker
                  << ": " << t.message << '\n';
    write_file(report_table_path(cfg), table.str());
}

} // namespace

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::ConfigInvalid, "cannot read config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("config parse: ") + e.what());
    }

    RunConfig cfg;
    try {
        if (j.contains("data_dir")) cfg.data_dir = j["data_dir"].get<std::string>();
        if (j.contains("tickers")) cfg.tickers = j["tickers"].get<std::vector<std::string>>();
        if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("parallelism")) cfg.parallelism = j["parallelism"].get<int>();
        if (j.contains("indicator")) {
            const auto& i = j["indicator"];
            if (i.contains("rsi_period")) cfg.indicator.rsi_period = i["rsi_period"].get<int>();
            if (i.contains("wr_period")) cfg.indicator.wr_period = i["wr_period"].get<int>();
            if (i.contains("macd_fast")) cfg.indicator.macd_fast = i["macd_fast"].get<int>();
            if (i.contains("macd_slow")) cfg.indicator.macd_slow = i["macd_slow"].get<int>();
        }
        if (j.contains("labeler") && j["labeler"].contains("window"))
            cfg.labeler.window = j["labeler"]["window"].get<int>();
        if (j.contains("split")) {
            const auto& s = j["split"];
            if (s.contains("train_start")) cfg.split.train_start = json_date(s["train_start"]);
            if (s.contains("train_end")) cfg.split.train_end = json_date(s["train_end"]);
            if (s.contains("test_start")) cfg.split.test_start = json_date(s["test_start"]);
            if (s.contains("test_end")) cfg.split.test_end = json_date(s["test_end"]);
        }
        if (j.contains("mlp")) {
            const auto& m = j["mlp"];
            if (m.contains("layers")) cfg.mlp.layers = m["layers"].get<std::vector<int>>();
            if (m.contains("epochs")) cfg.mlp.epochs = m["epochs"].get<int>();
            if (m.contains("batch_size")) cfg.mlp.batch_size = m["batch_size"].get<int>();
            if (m.contains("seed")) cfg.mlp.seed = m["seed"].get<std::uint64_t>();
            if (m.contains("learning_rate")) cfg.mlp.learning_rate = m["learning_rate"].get<double>();
        }
        if (j.contains("trading")) {
            const auto& t = j["trading"];
            if (t.contains("starting_capital"))
                cfg.trading.starting_capital = t["starting_capital"].get<double>();
            if (t.contains("commission_per_side"))
                cfg.trading.commission_per_side = t["commission_per_side"].get<double>();
            if (t.contains("stop_loss_fraction"))
                cfg.trading.stop_loss_fraction = t["stop_loss_fraction"].get<double>();
        }
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigInvalid, std::string("config field: ") + e.what());
    }

    if (cfg.indicator.macd_fast >= cfg.indicator.macd_slow)
        throw Error(Errc::ConfigInvalid, "macd_fast must be < macd_slow");
    if (cfg.labeler.window < 3 || cfg.labeler.window % 2 == 0)
        throw Error(Errc::ConfigInvalid, "labeler window must be odd and >= 3");
    if (cfg.parallelism < 1)
        throw Error(Errc::ConfigInvalid, "parallelism must be >= 1");
    if (!(cfg.trading.starting_capital > 0) || cfg.trading.commission_per_side < 0 ||
        !(cfg.trading.stop_loss_fraction > 0 && cfg.trading.stop_loss_fraction < 1))
        throw Error(Errc::ConfigInvalid, "invalid trading parameters");
    return cfg;
}

std::string config_json(const RunConfig& cfg) {
    json j;
    j["data_dir"] = cfg.data_dir.string();
    j["tickers"] = cfg.tickers;
    // parallelism is deliberately omitted: it is an execution knob that must
    // not change any artifact byte
    j["output_dir"] = cfg.output_dir.string();
    j["indicator"] = {{"rsi_period", cfg.indicator.rsi_period},
                      {"wr_period", cfg.indicator.wr_period},
                      {"macd_fast", cfg.indicator.macd_fast},
                      {"macd_slow", cfg.indicator.macd_slow}};
    j["labeler"] = {{"window", cfg.labeler.window}};
    j["split"] = {{"train_start", cfg.split.train_start.str()},
                  {"train_end", cfg.split.train_end.str()},
                  {"test_start", cfg.split.test_start.str()},
                  {"test_end", cfg.split.test_end.str()}};
    j["mlp"] = {{"layers", cfg.mlp.layers},
                {"epochs", cfg.mlp.epochs},
                {"batch_size", cfg.mlp.batch_size},
                {"seed", cfg.mlp.seed},
                {"learning_rate", cfg.mlp.learning_rate}};
    j["trading"] = {{"starting_capital", cfg.trading.starting_capital},
                    {"commission_per_side", cfg.trading.commission_per_side},
                    {"stop_loss_fraction", cfg.trading.stop_loss_fraction}};
    return j.dump();
}

fs::path adjusted_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_adjusted.csv"); }
fs::path train_set_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_train.csv"); }
fs::path test_set_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_test.csv"); }
fs::path normalizer_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_normalizer.json"); }
fs::path model_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_model.json"); }
fs::path trace_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_trace.csv"); }
fs::path predictions_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_predictions.csv"); }
fs::path trades_csv_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_trades.csv"); }
fs::path trades_log_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_trades.txt"); }
fs::path metrics_path(const RunConfig& c, const std::string& t) { return c.output_dir / (t + "_metrics.csv"); }
fs::path report_csv_path(const RunConfig& c) { return c.output_dir / "report.csv"; }
fs::path report_table_path(const RunConfig& c) { return c.output_dir / "report.txt"; }

void stage_ingest(const RunConfig& cfg, const std::string& ticker) {
    fs::create_directories(cfg.output_dir);
    const TickerSeries series = load_ticker(cfg.data_dir / (ticker + ".csv"), ticker);
    write_file(adjusted_path(cfg, ticker), serialize_adjusted_csv(series.bars));

    json prov;
    prov["symbol"] = series.symbol;
    prov["rows"] = series.row_count;
    prov["first_date"] = series.first_date.str();
    prov["last_date"] = series.last_date.str();
    write_file(cfg.output_dir / (ticker + "_ingest.json"), prov.dump() + "\n");
}

void stage_prepare(const RunConfig& cfg, const std::string& ticker) {
    std::istringstream in(read_file(adjusted_path(cfg, ticker)));
    const auto bars = parse_adjusted_csv(in);
    const auto rows = compute_feature_rows(bars, cfg.indicator);
    const auto labeled = label_extrema(rows, cfg.labeler);
    auto [train_rows, test_rows] = split_by_date(labeled, cfg.split);

    const Normalizer norm = Normalizer::fit(train_rows);
    auto train = apply_normalizer(norm, train_rows);
    const auto test = apply_normalizer(norm, test_rows);
    train = resample_minority(train, cfg.mlp.seed);

    write_file(train_set_path(cfg, ticker), dataset_csv(train));
    write_file(test_set_path(cfg, ticker), dataset_csv(test));

    json nj;
    const std::pair<const char*, Normalizer::Range> ranges[] = {
        {"close", norm.close}, {"rsi", norm.rsi}, {"williams_r", norm.wr}, {"macd", norm.macd}};
    for (const auto& [name, range] : ranges)
        nj[name] = {{"min", range.min}, {"max", range.max}};
    write_file(normalizer_path(cfg, ticker), nj.dump() + "\n");
}

void stage_train(const RunConfig& cfg, const std::string& ticker) {
    const auto train_set = parse_dataset_csv(read_file(train_set_path(cfg, ticker)));
    auto [model, trace] = train(init(cfg.mlp), train_set);
    write_file(model_path(cfg, ticker), save(model) + "\n");

    std::ostringstream tr;
    tr << "epoch,loss,accuracy\n";
    for (std::size_t e = 0; e < trace.loss.size(); ++e)
        tr << e + 1 << ',' << fmt(trace.loss[e]) << ',' << fmt(trace.accuracy[e]) << '\n';
    write_file(trace_path(cfg, ticker), tr.str());
}

void stage_backtest(const RunConfig& cfg, const std::string& ticker) {
    const MlpModel model = load(read_file(model_path(cfg, ticker)));
    const auto test = parse_dataset_csv(read_file(test_set_path(cfg, ticker)));

    std::vector<Label> predicted;
    predicted.reserve(test.size());
    std::ostringstream pred;
    pred << "Date,Actual,Predicted\n";
    for (const auto& s : test) {
        const Label p = predict(model, to_vector(s.features));
        predicted.push_back(p);
        pred << s.date.str() << ',' << static_cast<int>(s.label) << ',' << static_cast<int>(p)
             << '\n';
    }
    write_file(predictions_path(cfg, ticker), pred.str());

    const Ledger ledger = simulate(price_series(test), predicted, cfg.trading);
    write_file(trades_csv_path(cfg, ticker), serialize_trades_csv(ledger));
    write_file(trades_log_path(cfg, ticker), format_trade_log(ledger));
}

void stage_evaluate(const RunConfig& cfg, const std::string& ticker) {
    write_file(metrics_path(cfg, ticker), metrics_csv(cfg, evaluate_ticker(cfg, ticker)));
}

PipelineResult run_pipeline(const RunConfig& cfg) {
    if (cfg.tickers.empty())
        throw Error(Errc::ConfigInvalid, "no tickers configured");
    fs::create_directories(cfg.output_dir);

    PipelineResult result;
    result.tickers.resize(cfg.tickers.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.tickers.size()) break;
            TickerResult& tr = result.tickers[i];
            tr.ticker = cfg.tickers[i];
            try {
                stage_ingest(cfg, tr.ticker);
                stage_prepare(cfg, tr.ticker);
                stage_train(cfg, tr.ticker);
                stage_backtest(cfg, tr.ticker);
                const Evaluation ev = evaluate_ticker(cfg, tr.ticker);
                write_file(metrics_path(cfg, tr.ticker), metrics_csv(cfg, ev));
                tr.stats = ev.stats;
                tr.class_scores = ev.class_scores;
                tr.matrix = ev.matrix;
                tr.status = TickerStatus::Ok;
            } catch (const Error& e) {
                // insufficient history for the configured split is a logged skip
                tr.status = e.code() == Errc::EmptySplit ? TickerStatus::Skipped
                                                         : TickerStatus::Failed;
                tr.message = e.what();
            } catch (const std::exception& e) {
                tr.status = TickerStatus::Failed;
                tr.message = e.what();
            }
        }
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), cfg.tickers.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    for (const auto& t : result.tickers) {
        if (t.status == TickerStatus::Failed) result.any_failed = true;
        if (t.status == TickerStatus::Ok) result.any_succeeded = true;
    }
    write_aggregate_report(cfg, result);
    return result;
}

} // namespace nt
