#include "curvattack/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace curvattack {

namespace {

double act_eval(Activation a, double z) {
    switch (a) {
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Identity: return z;
    }
    return z;
}

// Derivative in terms of the activation value where possible (sigmoid),
// otherwise of the pre-activation. Relu derivative at 0 is 0 by convention.
double act_deriv(Activation a, double z, double y) {
    switch (a) {
        case Activation::Sigmoid: return y * (1.0 - y);
        case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

struct ForwardTrace {
    std::vector<Vec> pre;   // pre-activations z_i per layer
    std::vector<Vec> post;  // activations, post[0] = input
};

ForwardTrace forward_trace(const Network& net, const Vec& x) {
    if (x.size() != net.input_dim())
        throw DimensionError("forward: input has size " + std::to_string(x.size()) +
                             ", network expects " + std::to_string(net.input_dim()));
    ForwardTrace t;
    t.post.push_back(x);
    for (const auto& layer : net.layers) {
        if (layer.w.cols() != t.post.back().size())
            throw DimensionError("forward: layer dimensions do not chain");
        Vec z = layer.w * t.post.back() + layer.b;
        Vec y(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) y[i] = act_eval(layer.act, z[i]);
        t.pre.push_back(std::move(z));
        t.post.push_back(std::move(y));
    }
    return t;
}

Vec softmax(const Vec& logits) {
    Vec s = (logits.array() - logits.maxCoeff()).exp();
    return s / s.sum();
}

Vec head_probs(const Network& net, const Vec& out) {
    if (net.head == OutputHead::Bernoulli) {
        if (out.size() != 1)
            throw DimensionError("bernoulli head requires a single output");
        double p = clamp_prob(out[0]);
        Vec prob(2);
        prob << 1.0 - p, p;
        return prob;
    }
    Vec prob = softmax(out);
    for (Eigen::Index i = 0; i < prob.size(); ++i) prob[i] = clamp_prob(prob[i]);
    return prob;
}

}  // namespace

Network make_mlp(const std::vector<int>& widths, Activation hidden_act,
                 OutputHead head, std::uint64_t seed) {
    Network net;
    net.head = head;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const int fan_in = widths[i];
        const int fan_out = widths[i + 1];
        const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-r, r);
        Layer layer;
        layer.w = Mat(fan_out, fan_in);
        layer.b = Vec::Zero(fan_out);
        for (int row = 0; row < fan_out; ++row)
            for (int col = 0; col < fan_in; ++col) layer.w(row, col) = dist(rng);
        const bool last = (i + 2 == widths.size());
        // The final layer feeds the head: sigmoid for Bernoulli, raw logits
        // for softmax.
        layer.act = last ? (head == OutputHead::Bernoulli ? Activation::Sigmoid
                                                          : Activation::Identity)
                         : hidden_act;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Vec forward(const Network& net, const Vec& x) {
    return head_probs(net, forward_trace(net, x).post.back());
}

int predict_class(const Network& net, const Vec& x) {
    Vec p = forward(net, x);
    Eigen::Index best = 0;
    p.maxCoeff(&best);
    return static_cast<int>(best);
}

Mat input_jacobian(const Network& net, const Vec& x) {
    ForwardTrace t = forward_trace(net, x);
    // Reverse accumulation through the explicit layer derivatives:
    // J = D_L W_L ... D_1 W_1 with D_i = diag(act'(z_i)).
    Mat jac;  // d(last activation)/dx
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        const Layer& layer = net.layers[i];
        Vec d(t.pre[i].size());
        for (Eigen::Index k = 0; k < d.size(); ++k)
            d[k] = act_deriv(layer.act, t.pre[i][k], t.post[i + 1][k]);
        if (i == 0)
            jac = d.asDiagonal() * layer.w;
        else
            jac = d.asDiagonal() * (layer.w * jac);
    }
    if (net.head == OutputHead::Bernoulli) return jac;  // 1 x n, dp/dx
    // Softmax head: dP/dlogits = diag(p) - p p^T.
    Vec p = softmax(t.post.back());
    Mat s = Mat(p.asDiagonal()) - p * p.transpose();
    return s * jac;
}

double mean_cross_entropy(const Network& net, const Dataset& data) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        Vec p = forward(net, data.inputs[i]);
        total -= std::log(clamp_prob(p[data.labels[i]]));
    }
    return total / static_cast<double>(data.size());
}

double accuracy(const Network& net, const Dataset& data) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (predict_class(net, data.inputs[i]) == data.labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

Network train(Network net, const Dataset& data, const TrainConfig& cfg) {
    if (data.inputs.size() != data.labels.size())
        throw DimensionError("train: inputs and labels differ in length");
    if (cfg.epochs == 0) return net;

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const std::size_t n_layers = net.layers.size();
    std::vector<Mat> grad_w(n_layers);
    std::vector<Vec> grad_b(n_layers);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            for (std::size_t l = 0; l < n_layers; ++l) {
                grad_w[l] = Mat::Zero(net.layers[l].w.rows(), net.layers[l].w.cols());
                grad_b[l] = Vec::Zero(net.layers[l].b.size());
            }
            for (std::size_t idx = start; idx < stop; ++idx) {
                const Vec& x = data.inputs[order[idx]];
                const int label = data.labels[order[idx]];
                ForwardTrace t = forward_trace(net, x);

                // delta = dLoss/dz for the last layer. Cross-entropy against
                // both heads reduces to (prediction - target) on the logits.
                Vec delta;
                if (net.head == OutputHead::Bernoulli) {
                    delta = Vec(1);
                    delta[0] = t.post.back()[0] - static_cast<double>(label);
                } else {
                    delta = softmax(t.post.back());
                    delta[label] -= 1.0;
                }
                for (std::size_t l = n_layers; l-- > 0;) {
                    grad_w[l] += delta * t.post[l].transpose();
                    grad_b[l] += delta;
                    if (l > 0) {
                        Vec up = net.layers[l].w.transpose() * delta;
                        delta = Vec(up.size());
                        for (Eigen::Index k = 0; k < up.size(); ++k)
                            delta[k] = up[k] * act_deriv(net.layers[l - 1].act,
                                                         t.pre[l - 1][k],
                                                         t.post[l][k]);
                    }
                }
            }
            const double scale = cfg.learning_rate / static_cast<double>(stop - start);
            for (std::size_t l = 0; l < n_layers; ++l) {
                net.layers[l].w -= scale * grad_w[l];
                net.layers[l].b -= scale * grad_b[l];
            }
        }
        const double loss = mean_cross_entropy(net, data);
        if (!std::isfinite(loss))
            throw DivergenceError("train: loss became non-finite at epoch " +
                                  std::to_string(epoch));
    }
    return net;
}

namespace {

const char* act_name(Activation a) {
    switch (a) {
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "sigmoid";
}

Activation act_from_name(const std::string& s) {
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "relu") return Activation::Relu;
    if (s == "identity") return Activation::Identity;
    throw FormatError("unknown activation: " + s);
}

}  // namespace

std::string to_json(const Network& net) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["head"] = net.head == OutputHead::Bernoulli ? "bernoulli" : "categorical";
    doc["layers"] = nlohmann::json::array();
    for (const auto& layer : net.layers) {
        nlohmann::json jl;
        auto rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
            auto row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < layer.w.cols(); ++c) row.push_back(layer.w(r, c));
            rows.push_back(std::move(row));
        }
        jl["w"] = std::move(rows);
        auto b = nlohmann::json::array();
        for (Eigen::Index i = 0; i < layer.b.size(); ++i) b.push_back(layer.b[i]);
        jl["b"] = std::move(b);
        jl["act"] = act_name(layer.act);
        doc["layers"].push_back(std::move(jl));
    }
    return doc.dump(2);
}

Network network_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("network json: ") + e.what());
    }
    Network net;
    const std::string head = doc.at("head").get<std::string>();
    if (head == "bernoulli")
        net.head = OutputHead::Bernoulli;
    else if (head == "categorical")
        net.head = OutputHead::Categorical;
    else
        throw FormatError("unknown head: " + head);
    for (const auto& jl : doc.at("layers")) {
        Layer layer;
        const auto& rows = jl.at("w");
        const Eigen::Index n_rows = static_cast<Eigen::Index>(rows.size());
        if (n_rows == 0) throw FormatError("network json: empty weight matrix");
        const Eigen::Index n_cols = static_cast<Eigen::Index>(rows[0].size());
        layer.w = Mat(n_rows, n_cols);
        for (Eigen::Index r = 0; r < n_rows; ++r) {
            if (static_cast<Eigen::Index>(rows[r].size()) != n_cols)
                throw FormatError("network json: ragged weight matrix");
            for (Eigen::Index c = 0; c < n_cols; ++c)
                layer.w(r, c) = rows[r][c].get<double>();
        }
        const auto& b = jl.at("b");
        layer.b = Vec(static_cast<Eigen::Index>(b.size()));
        for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b[i] = b[i].get<double>();
        layer.act = act_from_name(jl.at("act").get<std::string>());
        net.layers.push_back(std::move(layer));
    }
    if (net.layers.empty()) throw FormatError("network json: no layers");
    return net;
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << to_json(net) << "\n";
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

}  // namespace curvattack
