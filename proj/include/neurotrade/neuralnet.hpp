#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "neurotrade/dataset.hpp"

namespace nt {

struct MlpConfig {
    std::vector<int> layers{4, 5, 4, 3};
    int epochs = 200;
    int batch_size = 128;
    std::uint64_t seed = 1234;
    double learning_rate = 0.3;
};

// Feedforward classifier: sigmoid hidden layers, softmax output,
// cross-entropy loss. Immutable after training.
struct MlpModel {
    MlpConfig cfg;
    std::vector<Eigen::MatrixXd> weights; // fan_in x fan_out per layer
    std::vector<Eigen::VectorXd> biases;
};

struct TrainingTrace {
    std::vector<double> loss;     // per-epoch mean cross-entropy
    std::vector<double> accuracy; // per-epoch training accuracy
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

// Glorot-uniform weights from a generator seeded with cfg.seed; zero biases.
MlpModel init(const MlpConfig& cfg);

Eigen::VectorXd forward(const MlpModel& model, const Eigen::VectorXd& features);

double sample_loss(const MlpModel& model, const Eigen::VectorXd& features, Label label);

Gradients backprop(const MlpModel& model, const Eigen::VectorXd& features, Label label);

// Mini-batch gradient descent, fixed epoch count, fully deterministic
// given cfg.seed (input order does not matter: samples are canonically
// sorted before the internal seeded shuffle).
std::pair<MlpModel, TrainingTrace> train(MlpModel model,
                                         const std::vector<LabeledSample>& samples);

// argmax of forward; ties break toward the lowest class code.
Label predict(const MlpModel& model, const Eigen::VectorXd& features);

// Max relative discrepancy between backprop and central finite differences.
double gradient_check(const MlpModel& model, const LabeledSample& sample, double epsilon);

// Versioned JSON serialization; load(save(m)) reproduces forward bitwise.
std::string save(const MlpModel& model);
MlpModel load(const std::string& bytes);

Eigen::VectorXd to_vector(const std::array<double, 4>& features);

} // namespace nt
