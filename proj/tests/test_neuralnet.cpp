#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "neurotrade/neuralnet.hpp"

using namespace nt;

namespace {

LabeledSample sample_of(std::array<double, 4> f, Label l) {
    LabeledSample s;
    s.features = f;
    s.label = l;
    return s;
}

MlpModel random_model(std::uint64_t seed) {
    MlpConfig cfg;
    cfg.seed = seed;
    return init(cfg);
}

// One Gaussian blob per class in 4-d feature space; separation far larger
// than spread, so a nearest-centroid rule is essentially Bayes-optimal.
std::vector<LabeledSample> blob_set(int per_class, std::uint64_t seed) {
    const std::array<std::array<double, 4>, 3> centers{{{0.1, 0.1, 0.1, 0.1},
                                                        {0.9, 0.9, 0.1, 0.5},
                                                        {0.1, 0.9, 0.9, 0.9}}};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.03);
    std::vector<LabeledSample> samples;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < per_class; ++i) {
            LabeledSample s;
            s.date = Date::from_serial(11000 + c * per_class + i);
            for (int k = 0; k < 4; ++k) s.features[k] = centers[c][k] + noise(rng);
            s.label = static_cast<Label>(c);
            s.raw_close = 100.0;
            samples.push_back(s);
        }
    return samples;
}

int nearest_centroid(const std::array<double, 4>& f) {
    const std::array<std::array<double, 4>, 3> centers{{{0.1, 0.1, 0.1, 0.1},
                                                        {0.9, 0.9, 0.1, 0.5},
                                                        {0.1, 0.9, 0.9, 0.9}}};
    int best = 0;
    double best_d = 1e300;
    for (int c = 0; c < 3; ++c) {
        double d = 0;
        for (int k = 0; k < 4; ++k) d += (f[k] - centers[c][k]) * (f[k] - centers[c][k]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

} // namespace

TEST_CASE("init is deterministic in the seed") {
    const auto a = random_model(1234);
    const auto b = random_model(1234);
    const auto c = random_model(1235);
    bool identical = true, differs = false;
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        identical = identical && (a.weights[l] == b.weights[l]);
        differs = differs || (a.weights[l] != c.weights[l]);
    }
    CHECK(identical);
    CHECK(differs);
    for (const auto& bias : a.biases) CHECK(bias.isZero());
}

TEST_CASE("init rejects a topology without hidden layers") {
    MlpConfig cfg;
    cfg.layers = {4, 3};
    CHECK_THROWS_AS(init(cfg), Error);
}

TEST_CASE("zero model forwards to the uniform distribution") {
    auto model = random_model(1);
    for (auto& w : model.weights) w.setZero();
    const Eigen::VectorXd p = forward(model, Eigen::VectorXd::Zero(4));
    for (int i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(predict(model, Eigen::VectorXd::Zero(4)) == Label::Hold); // tie-break to code 0
}

TEST_CASE("forward outputs a probability vector for random inputs") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    const auto model = random_model(7);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) x[i] = u(rng);
        const Eigen::VectorXd p = forward(model, x);
        double sum = 0;
        for (int i = 0; i < 3; ++i) {
            CHECK(p[i] > 0.0);
            CHECK(std::isfinite(p[i]));
            sum += p[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("forward matches an independent layer-by-layer recomputation") {
    const auto model = random_model(13);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x[i] = u(rng);

    // straight-line re-evaluation with scalar loops
    std::vector<double> a(x.data(), x.data() + 4);
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        const auto& w = model.weights[l];
        std::vector<double> z(static_cast<std::size_t>(w.cols()), 0.0);
        for (int j = 0; j < w.cols(); ++j) {
            z[j] = model.biases[l][j];
            for (int i = 0; i < w.rows(); ++i) z[j] += a[i] * w(i, j);
        }
        if (l + 1 < model.weights.size()) {
            for (auto& v : z) v = 1.0 / (1.0 + std::exp(-v));
        } else {
            double m = z[0];
            for (double v : z) m = std::max(m, v);
            double s = 0;
            for (auto& v : z) {
                v = std::exp(v - m);
                s += v;
            }
            for (auto& v : z) v /= s;
        }
        a = z;
    }
    const Eigen::VectorXd p = forward(model, x);
    for (int i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(a[i]).epsilon(1e-12));
}

TEST_CASE("forward rejects wrong feature dimension") {
    CHECK_THROWS_AS(forward(random_model(1), Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("predict argmax and tie-breaks") {
    // craft a model whose output layer yields controllable logits is awkward;
    // check the argmax rule through forward probabilities instead
    const auto model = random_model(5);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 0.3);
    const Eigen::VectorXd p = forward(model, x);
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (p[i] > p[best]) best = i;
    CHECK(predict(model, x) == static_cast<Label>(best));
}

TEST_CASE("gradient check on random models and samples") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto model = random_model(100 + trial);
        LabeledSample s = sample_of({u(rng), u(rng), u(rng), u(rng)},
                                    static_cast<Label>(trial % 3));
        CHECK(gradient_check(model, s, 1e-5) < 1e-4);
    }
}

TEST_CASE("gradient check with zero input still passes (bias gradients)") {
    const auto model = random_model(77);
    CHECK(gradient_check(model, sample_of({0, 0, 0, 0}, Label::Buy), 1e-5) < 1e-4);
}

TEST_CASE("a sign-flipped gradient is caught by the finite-difference oracle") {
    const auto model = random_model(9);
    const LabeledSample s = sample_of({0.2, 0.8, 0.5, 0.4}, Label::Sell);
    const Eigen::VectorXd x = to_vector(s.features);
    const Gradients g = backprop(model, x, s.label);

    MlpModel probe = model;
    double worst = 0;
    for (std::size_t l = 0; l < probe.weights.size(); ++l)
        for (int i = 0; i < probe.weights[l].rows(); ++i)
            for (int j = 0; j < probe.weights[l].cols(); ++j) {
                const double saved = probe.weights[l](i, j);
                probe.weights[l](i, j) = saved + 1e-5;
                const double up = sample_loss(probe, x, s.label);
                probe.weights[l](i, j) = saved - 1e-5;
                const double down = sample_loss(probe, x, s.label);
                probe.weights[l](i, j) = saved;
                const double fd = (up - down) / 2e-5;
                const double mutant = -g.weights[l](i, j); // deliberate sign flip
                const double rel =
                    std::abs(mutant - fd) / std::max(std::abs(mutant) + std::abs(fd), 1e-3);
                worst = std::max(worst, rel);
            }
    CHECK(worst > 1e-2);
}

TEST_CASE("training learns a separable 3-blob toy set") {
    const auto samples = blob_set(100, 5);
    // sanity: the blobs really are separable by centroid distance
    for (const auto& s : samples)
        CHECK(nearest_centroid(s.features) == static_cast<int>(s.label));

    auto [model, trace] = train(init(MlpConfig{}), samples);
    REQUIRE(trace.accuracy.size() == 200);
    CHECK(trace.accuracy.back() >= 0.95);

    // 10-epoch moving average of the loss never increases
    for (std::size_t e = 0; e + 10 < trace.loss.size(); ++e) {
        double w1 = 0, w2 = 0;
        for (std::size_t k = 0; k < 10; ++k) {
            w1 += trace.loss[e + k];
            w2 += trace.loss[e + k + 1];
        }
        CHECK(w2 <= w1 + 1e-9);
    }
}

TEST_CASE("training is deterministic and order-independent") {
    const auto samples = blob_set(40, 6);
    auto [m1, t1] = train(init(MlpConfig{}), samples);
    auto [m2, t2] = train(init(MlpConfig{}), samples);

    auto shuffled = samples;
    std::mt19937_64 rng(999);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto [m3, t3] = train(init(MlpConfig{}), shuffled);

    for (std::size_t l = 0; l < m1.weights.size(); ++l) {
        CHECK(m1.weights[l] == m2.weights[l]);
        CHECK(m1.weights[l] == m3.weights[l]);
        CHECK(m1.biases[l] == m2.biases[l]);
        CHECK(m1.biases[l] == m3.biases[l]);
    }
    CHECK(t1.loss == t2.loss);
    CHECK(t1.loss == t3.loss);
}

TEST_CASE("train rejects an empty dataset") {
    CHECK_THROWS_AS(train(init(MlpConfig{}), {}), Error);
}

TEST_CASE("save/load round-trips forward outputs bitwise") {
    const auto samples = blob_set(20, 8);
    auto [model, trace] = train(init(MlpConfig{}), samples);
    const MlpModel restored = load(save(model));

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) x[i] = u(rng);
        const Eigen::VectorXd a = forward(model, x);
        const Eigen::VectorXd b = forward(restored, x);
        for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
        CHECK(predict(model, x) == predict(restored, x));
    }
}

TEST_CASE("load rejects truncated and future-version payloads") {
    const std::string bytes = save(random_model(3));
    try {
        load(bytes.substr(0, bytes.size() / 2));
        FAIL("expected CorruptModel");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CorruptModel);
    }

    std::string future = bytes;
    const auto pos = future.find("\"format_version\":1");
    REQUIRE(pos != std::string::npos);
    future.replace(pos, 18, "\"format_version\":2");
    try {
        load(future);
        FAIL("expected VersionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::VersionMismatch);
    }
}
