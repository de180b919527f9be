#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvattack/types.hpp"

namespace curvattack {

enum class Activation { Sigmoid, Relu, Identity };

/// Output head: a single sigmoid read as a Bernoulli parameter, or a softmax
/// over C logits.
enum class OutputHead { Bernoulli, Categorical };

struct Layer {
    Mat w;
    Vec b;
    Activation act = Activation::Sigmoid;
};

/// Dense feedforward classifier. Immutable after training; forward and
/// input_jacobian are pure and safe for concurrent read-only use.
struct Network {
    std::vector<Layer> layers;
    OutputHead head = OutputHead::Bernoulli;

    int input_dim() const { return static_cast<int>(layers.front().w.cols()); }
    int output_dim() const { return static_cast<int>(layers.back().w.rows()); }
    /// Number of classes: 2 for a Bernoulli head, otherwise the logit count.
    int num_classes() const {
        return head == OutputHead::Bernoulli ? 2 : output_dim();
    }
};

struct Dataset {
    std::vector<Vec> inputs;
    std::vector<int> labels;

    std::size_t size() const { return inputs.size(); }
};

struct TrainConfig {
    double learning_rate = 0.5;
    int epochs = 2000;
    int batch_size = 4;
    std::uint64_t seed = 0;
};

/// Builds an MLP with the given layer widths, hidden activation and head.
/// Weights are drawn uniformly from [-r, r] with r = 1/sqrt(fan_in);
/// deterministic given the seed.
Network make_mlp(const std::vector<int>& widths, Activation hidden_act,
                 OutputHead head, std::uint64_t seed);

/// Class probabilities at x. A Bernoulli head returns (1-p, p) with
/// p = sigmoid(logit) the probability of class 1; a categorical head returns
/// the softmax vector. Probabilities are clamped to the open simplex.
Vec forward(const Network& net, const Vec& x);

int predict_class(const Network& net, const Vec& x);

/// Exact chain-rule Jacobian of the network output with respect to the input.
/// One row (dp/dx) for a Bernoulli head, C rows for a categorical head.
Mat input_jacobian(const Network& net, const Vec& x);

/// Mini-batch SGD on the cross-entropy loss. Deterministic given cfg.seed.
/// Throws DivergenceError (with the epoch index) if the loss goes non-finite.
Network train(Network net, const Dataset& data, const TrainConfig& cfg);

/// Mean cross-entropy of the network on the dataset.
double mean_cross_entropy(const Network& net, const Dataset& data);

double accuracy(const Network& net, const Dataset& data);

// JSON serialization. Round-trips are value-exact for f64.
std::string to_json(const Network& net);
Network network_from_json(const std::string& text);
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

}  // namespace curvattack
