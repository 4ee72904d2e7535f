#include "neurotrade/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include <json.hpp>

namespace nt {

namespace {

constexpr int kFormatVersion = 1;

void validate_topology(const MlpConfig& cfg) {
    if (cfg.layers.size() < 3)
        throw Error(Errc::InvalidTopology, "need at least one hidden layer");
    for (int n : cfg.layers)
        if (n <= 0)
            throw Error(Errc::InvalidTopology, "layer sizes must be positive");
    if (cfg.epochs <= 0 || cfg.batch_size <= 0 || cfg.learning_rate <= 0)
        throw Error(Errc::InvalidTopology, "epochs, batch_size and learning_rate must be positive");
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

// max-subtraction keeps the exponentials bounded
Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
    const double m = z.maxCoeff();
    Eigen::VectorXd e = (z.array() - m).exp();
    return e / e.sum();
}

struct ForwardPass {
    std::vector<Eigen::VectorXd> activations; // activations[0] = input
    std::vector<Eigen::VectorXd> pre;         // pre-activation per layer
};

ForwardPass run_forward(const MlpModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.cfg.layers.front())
        throw Error(Errc::DimensionMismatch,
                    "expected " + std::to_string(model.cfg.layers.front()) + " features, got " +
                        std::to_string(x.size()));
    ForwardPass fp;
    fp.activations.push_back(x);
    const std::size_t n_layers = model.weights.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        Eigen::VectorXd z = model.weights[l].transpose() * fp.activations.back() + model.biases[l];
        fp.pre.push_back(z);
        fp.activations.push_back(l + 1 == n_layers ? softmax(z) : sigmoid(z));
    }
    return fp;
}

Eigen::VectorXd one_hot(Label label, int classes) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(classes);
    y[static_cast<int>(label)] = 1.0;
    return y;
}

double cross_entropy(const Eigen::VectorXd& probs, Label label) {
    const double p = std::max(probs[static_cast<int>(label)], 1e-300);
    return -std::log(p);
}

// Total order on samples so training does not depend on caller ordering.
bool sample_less(const LabeledSample& a, const LabeledSample& b) {
    return std::tie(a.date, a.label, a.features, a.raw_close) <
           std::tie(b.date, b.label, b.features, b.raw_close);
}

} // namespace

Eigen::VectorXd to_vector(const std::array<double, 4>& features) {
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x[i] = features[i];
    return x;
}

MlpModel init(const MlpConfig& cfg) {
    validate_topology(cfg);
    MlpModel model;
    model.cfg = cfg;
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t l = 0; l + 1 < cfg.layers.size(); ++l) {
        const int fan_in = cfg.layers[l];
        const int fan_out = cfg.layers[l + 1];
        const double a = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-a, a);
        Eigen::MatrixXd w(fan_in, fan_out);
        for (int i = 0; i < fan_in; ++i)
            for (int j = 0; j < fan_out; ++j) w(i, j) = dist(rng);
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return model;
}

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& features) {
    return run_forward(model, features).activations.back();
}

double sample_loss(const MlpModel& model, const Eigen::VectorXd& features, Label label) {
    return cross_entropy(forward(model, features), label);
}

Gradients backprop(const MlpModel& model, const Eigen::VectorXd& features, Label label) {
    const ForwardPass fp = run_forward(model, features);
    const std::size_t n_layers = model.weights.size();

    Gradients g;
    g.weights.resize(n_layers);
    g.biases.resize(n_layers);

    // softmax + cross-entropy: delta = p - y
    Eigen::VectorXd delta = fp.activations.back() - one_hot(label, model.cfg.layers.back());
    for (std::size_t l = n_layers; l-- > 0;) {
        g.weights[l] = fp.activations[l] * delta.transpose();
        g.biases[l] = delta;
        if (l > 0) {
            const Eigen::VectorXd& a = fp.activations[l];
            delta = (model.weights[l] * delta).cwiseProduct(
                a.cwiseProduct(Eigen::VectorXd::Ones(a.size()) - a));
        }
    }
    return g;
}

std::pair<MlpModel, TrainingTrace> train(MlpModel model,
                                         const std::vector<LabeledSample>& samples) {
    if (samples.empty())
        throw Error(Errc::EmptyDataset, "train called with no samples");

    std::vector<LabeledSample> data = samples;
    std::sort(data.begin(), data.end(), sample_less);

    const std::size_t n = data.size();
    const std::size_t batch = static_cast<std::size_t>(model.cfg.batch_size);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(model.cfg.seed);

    TrainingTrace trace;
    for (int epoch = 0; epoch < model.cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);

        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(start + batch, n);
            Gradients sum;
            for (std::size_t i = start; i < end; ++i) {
                const auto& s = data[order[i]];
                Gradients g = backprop(model, to_vector(s.features), s.label);
                if (sum.weights.empty()) {
                    sum = std::move(g);
                } else {
                    for (std::size_t l = 0; l < g.weights.size(); ++l) {
                        sum.weights[l] += g.weights[l];
                        sum.biases[l] += g.biases[l];
                    }
                }
            }
            const double scale = model.cfg.learning_rate / static_cast<double>(end - start);
            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                model.weights[l] -= scale * sum.weights[l];
                model.biases[l] -= scale * sum.biases[l];
            }
        }

        double loss = 0;
        long correct = 0;
        for (const auto& s : data) {
            const Eigen::VectorXd probs = forward(model, to_vector(s.features));
            loss += cross_entropy(probs, s.label);
            if (predict(model, to_vector(s.features)) == s.label) ++correct;
        }
        loss /= static_cast<double>(n);
        trace.loss.push_back(loss);
        trace.accuracy.push_back(static_cast<double>(correct) / static_cast<double>(n));
        if (!std::isfinite(loss))
            throw Error(Errc::NonFiniteLoss,
                        "diverged at epoch " + std::to_string(epoch + 1));
    }
    return {std::move(model), std::move(trace)};
}

Label predict(const MlpModel& model, const Eigen::VectorXd& features) {
    const Eigen::VectorXd p = forward(model, features);
    int best = 0;
    for (int c = 1; c < p.size(); ++c)
        if (p[c] > p[best]) best = c; // ties stay at the lowest code
    return static_cast<Label>(best);
}

double gradient_check(const MlpModel& model, const LabeledSample& sample, double epsilon) {
    MlpModel probe = model;
    const Eigen::VectorXd x = to_vector(sample.features);
    const Gradients analytic = backprop(model, x, sample.label);

    double worst = 0;
    auto check = [&](double& theta, double grad) {
        const double saved = theta;
        theta = saved + epsilon;
        const double up = sample_loss(probe, x, sample.label);
        theta = saved - epsilon;
        const double down = sample_loss(probe, x, sample.label);
        theta = saved;
        const double fd = (up - down) / (2.0 * epsilon);
        const double rel = std::abs(grad - fd) / std::max(std::abs(grad) + std::abs(fd), 1e-3);
        worst = std::max(worst, rel);
    };

    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        for (int i = 0; i < probe.weights[l].rows(); ++i)
            for (int j = 0; j < probe.weights[l].cols(); ++j)
                check(probe.weights[l](i, j), analytic.weights[l](i, j));
        for (int i = 0; i < probe.biases[l].size(); ++i)
            check(probe.biases[l][i], analytic.biases[l][i]);
    }
    return worst;
}

std::string save(const MlpModel& model) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["activation"] = {{"hidden", "sigmoid"}, {"output", "softmax"}};
    j["config"] = {{"layers", model.cfg.layers},
                   {"epochs", model.cfg.epochs},
                   {"batch_size", model.cfg.batch_size},
                   {"seed", model.cfg.seed},
                   {"learning_rate", model.cfg.learning_rate}};
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        nlohmann::json wm = nlohmann::json::array();
        for (int i = 0; i < model.weights[l].rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < model.weights[l].cols(); ++k) row.push_back(model.weights[l](i, k));
            wm.push_back(row);
        }
        j["weights"].push_back(wm);
        nlohmann::json bv = nlohmann::json::array();
        for (int i = 0; i < model.biases[l].size(); ++i) bv.push_back(model.biases[l][i]);
        j["biases"].push_back(bv);
    }
    return j.dump();
}

MlpModel load(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::CorruptModel, e.what());
    }
    try {
        if (!j.contains("format_version"))
            throw Error(Errc::CorruptModel, "missing format_version");
        if (j["format_version"].get<int>() != kFormatVersion)
            throw Error(Errc::VersionMismatch,
                        "unsupported format_version " + j["format_version"].dump());

        MlpModel model;
        const auto& c = j.at("config");
        model.cfg.layers = c.at("layers").get<std::vector<int>>();
        model.cfg.epochs = c.at("epochs").get<int>();
        model.cfg.batch_size = c.at("batch_size").get<int>();
        model.cfg.seed = c.at("seed").get<std::uint64_t>();
        model.cfg.learning_rate = c.at("learning_rate").get<double>();
        validate_topology(model.cfg);

        const auto& ws = j.at("weights");
        const auto& bs = j.at("biases");
        if (ws.size() != model.cfg.layers.size() - 1 || bs.size() != ws.size())
            throw Error(Errc::CorruptModel, "layer count mismatch");
        for (std::size_t l = 0; l + 1 < model.cfg.layers.size(); ++l) {
            const int fan_in = model.cfg.layers[l];
            const int fan_out = model.cfg.layers[l + 1];
            if (static_cast<int>(ws[l].size()) != fan_in)
                throw Error(Errc::CorruptModel, "weight shape mismatch");
            Eigen::MatrixXd w(fan_in, fan_out);
            for (int i = 0; i < fan_in; ++i) {
                if (static_cast<int>(ws[l][i].size()) != fan_out)
                    throw Error(Errc::CorruptModel, "weight shape mismatch");
                for (int k = 0; k < fan_out; ++k) w(i, k) = ws[l][i][k].get<double>();
            }
            if (static_cast<int>(bs[l].size()) != fan_out)
                throw Error(Errc::CorruptModel, "bias shape mismatch");
            Eigen::VectorXd b(fan_out);
            for (int i = 0; i < fan_out; ++i) b[i] = bs[l][i].get<double>();
            model.weights.push_back(std::move(w));
            model.biases.push_back(std::move(b));
        }
        for (const auto& w : model.weights)
            if (!w.allFinite())
                throw Error(Errc::CorruptModel, "non-finite parameters");
        return model;
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::CorruptModel, e.what());
    }
}

} // namespace nt
