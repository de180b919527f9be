// Command-line driver: training, single-point attacks, foliation and
// curvature exports, fooling-rate sweeps, MNIST-style per-image attacks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvattack/attacks.hpp"
#include "curvattack/bench.hpp"
#include "curvattack/data_io.hpp"
#include "curvattack/fim.hpp"
#include "curvattack/foliation2d.hpp"
#include "curvattack/network.hpp"

using namespace curvattack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

Box2 parse_region(const std::vector<double>& r) {
    if (r.size() != 4) throw CLI::ValidationError("--region needs 4 values: x0 y0 x1 y1");
    return Box2{Vec2(r[0], r[1]), Vec2(r[2], r[3])};
}

// "min:max:count"
void parse_budgets(const std::string& s, SweepConfig& cfg) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw CLI::ValidationError("--budgets must be min:max:count");
    cfg.budget_min = lo;
    cfg.budget_max = hi;
    cfg.budget_count = count;
}

void print_attack(const AttackResult& r) {
    std::cout << "method: " << attack_method_name(r.method) << "\n";
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        std::cout << "step " << i + 1 << ": [" << r.steps[i].transpose()
                  << "]  norm " << r.steps[i].norm() << "\n";
    }
    std::cout << "total: [" << r.total.transpose() << "]  norm " << r.total.norm() << "\n";
    std::cout << "p_before: [" << r.p_before.transpose() << "]\n";
    std::cout << "p_after:  [" << r.p_after.transpose() << "]\n";
    std::cout << "original class: " << r.original_class << "\n";
    std::cout << "fooled: " << (r.fooled ? "yes" : "no");
    if (r.fallback_to_ossa) std::cout << " (fell back to full-budget ossa)";
    std::cout << "\n";
}

void append_attack_csv(const std::string& path, const std::string& point_id,
                       const AttackResult& r, double epsilon, double split,
                       bool out_of_domain) {
    const bool fresh = !std::ifstream(path).good();
    std::ofstream out(path, std::ios::app);
    if (!out) throw FormatError("cannot open for writing: " + path);
    if (fresh)
        out << "point,method,epsilon,split,fooled,p_before_max,p_after_true_class,"
               "out_of_domain\n";
    out.precision(17);
    out << point_id << ',' << attack_method_name(r.method) << ',' << epsilon << ','
        << split << ',' << (r.fooled ? 1 : 0) << ',' << r.p_before.maxCoeff() << ','
        << r.p_after[r.original_class] << ',' << (out_of_domain ? 1 : 0) << '\n';
}

int cmd_train(const std::string& task, int hidden, int epochs, double lr, int batch,
              std::uint64_t seed, int train_points, const std::string& images,
              const std::string& labels, const std::string& out_path) {
    Network net;
    Dataset data;
    if (task == "xor" || task == "or") {
        if (task == "xor" && train_points > 0)
            data = xor_region_dataset(train_points, seed);
        else
            data = task == "xor" ? xor_dataset() : or_dataset();
        net = make_mlp({2, hidden, 1}, Activation::Sigmoid, OutputHead::Bernoulli, seed);
    } else if (task == "mnist") {
        if (images.empty() || labels.empty())
            throw CLI::ValidationError("--images and --labels are required for mnist");
        MnistSet set = load_mnist(images, labels, "train");
        data = set.as_dataset();
        net = make_mlp({784, hidden, 10}, Activation::Relu, OutputHead::Categorical, seed);
    } else {
        throw CLI::ValidationError("unknown task: " + task);
    }
    TrainConfig cfg;
    cfg.learning_rate = lr;
    cfg.epochs = epochs;
    cfg.batch_size = batch;
    cfg.seed = seed;
    net = train(std::move(net), data, cfg);
    std::cout << "final mean cross-entropy: " << mean_cross_entropy(net, data) << "\n";
    std::cout << "training accuracy: " << accuracy(net, data) << "\n";
    save_network(net, out_path);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher-information pullback geometry and spectral attacks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read flags from a key=value file");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a classifier and save it as JSON");
    std::string task = "xor", images_path, labels_path, net_out = "net.json";
    int hidden = 8, epochs = 4000, batch = 4;
    double lr = 0.5;
    std::uint64_t seed = 7;
    train_cmd->add_option("--task", task, "xor | or | mnist");
    train_cmd->add_option("--hidden", hidden, "hidden layer width");
    train_cmd->add_option("--epochs", epochs);
    train_cmd->add_option("--lr", lr);
    train_cmd->add_option("--batch", batch);
    train_cmd->add_option("--seed", seed);
    int train_points = 0;
    train_cmd->add_option("--train-points", train_points,
                          "xor: train on this many random points instead of the corners");
    train_cmd->add_option("--images", images_path, "IDX image file (mnist)");
    train_cmd->add_option("--labels", labels_path, "IDX label file (mnist)");
    train_cmd->add_option("--out", net_out);

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "attack a single 2D point");
    std::string net_path = "net.json", method_name = "ossa", attack_csv, spectrum_csv;
    double px = 0.5, py = 0.5, eps = 0.1, split = 0.6, dx = 1e-6, tau_rank = kDefaultRankTol;
    attack_cmd->add_option("--net", net_path)->required();
    attack_cmd->add_option("--x", px);
    attack_cmd->add_option("--y", py);
    attack_cmd->add_option("--eps", eps);
    attack_cmd->add_option("--split", split);
    attack_cmd->add_option("--method", method_name, "ossa | tssa | tssa-rot2d");
    attack_cmd->add_option("--dx", dx, "curvature finite-difference step");
    attack_cmd->add_option("--csv", attack_csv, "append the attack as a CSV row");
    attack_cmd->add_option("--spectrum-csv", spectrum_csv,
                           "dump metric eigenvalues and rank at the point");
    attack_cmd->add_option("--tau-rank", tau_rank, "relative rank tolerance");

    // foliate
    auto* foliate_cmd = app.add_subcommand("foliate", "trace kernel leaves from a seed grid");
    std::string foliate_out = "leaves.csv";
    std::vector<double> region_vals{0, 0, 1, 1};
    int seed_grid = 5, n_steps = 1000;
    double step = 1e-3;
    foliate_cmd->add_option("--net", net_path)->required();
    foliate_cmd->add_option("--grid", seed_grid, "seed points per axis");
    foliate_cmd->add_option("--region", region_vals)->expected(4);
    foliate_cmd->add_option("--step", step);
    foliate_cmd->add_option("--steps", n_steps);
    foliate_cmd->add_option("--out", foliate_out);

    // curvature
    auto* curv_cmd = app.add_subcommand("curvature", "export the signed curvature grid");
    std::string curv_out = "curvature.csv";
    int grid = 100;
    curv_cmd->add_option("--net", net_path)->required();
    curv_cmd->add_option("--grid", grid, "cells per axis");
    curv_cmd->add_option("--region", region_vals)->expected(4);
    curv_cmd->add_option("--dx", dx);
    curv_cmd->add_option("--out", curv_out);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "fooling-rate curves over a budget grid");
    std::string sweep_out = "sweep.csv", budgets_spec = "0:0.5:11";
    std::vector<std::string> method_names{"ossa", "tssa"};
    int n_points = 5000;
    sweep_cmd->add_option("--net", net_path)->required();
    sweep_cmd->add_option("--n", n_points, "points in the population");
    sweep_cmd->add_option("--budgets", budgets_spec, "min:max:count");
    sweep_cmd->add_option("--split", split);
    sweep_cmd->add_option("--seed", seed);
    sweep_cmd->add_option("--region", region_vals)->expected(4);
    sweep_cmd->add_option("--methods", method_names);
    sweep_cmd->add_option("--out", sweep_out);

    // mnist-attack
    auto* mn_cmd = app.add_subcommand("mnist-attack", "attack one image and export PGMs");
    std::string out_prefix = "attacked";
    int image_index = 0;
    mn_cmd->add_option("--net", net_path)->required();
    mn_cmd->add_option("--images", images_path)->required();
    mn_cmd->add_option("--labels", labels_path)->required();
    mn_cmd->add_option("--index", image_index);
    mn_cmd->add_option("--eps", eps);
    mn_cmd->add_option("--split", split);
    mn_cmd->add_option("--method", method_name, "ossa | tssa");
    mn_cmd->add_option("--csv", attack_csv, "append the attack as a CSV row");
    mn_cmd->add_option("--out-prefix", out_prefix);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*train_cmd)
            return cmd_train(task, hidden, epochs, lr, batch, seed, train_points,
                             images_path, labels_path, net_out);

        if (*attack_cmd) {
            Network net = load_network(net_path);
            Vec x(2);
            x << px, py;
            if (!spectrum_csv.empty()) {
                PullbackMetric g = pullback_metric(net, x);
                const int rank = metric_rank(g, tau_rank);
                std::ofstream out(spectrum_csv);
                out << "x1,x2";
                for (int i = 0; i < rank; ++i) out << ",lambda_" << i + 1;
                out << ",rank\n";
                out.precision(17);
                out << px << ',' << py;
                for (int i = 0; i < rank; ++i) out << ',' << g.eigenvalues()[i];
                out << ',' << rank << '\n';
            }
            AttackBudget budget{eps, split};
            AttackResult r = run_attack(net, x, attack_method_from_name(method_name),
                                        budget);
            print_attack(r);
            if (!attack_csv.empty()) {
                std::ostringstream id;
                id << '(' << px << ' ' << py << ')';
                append_attack_csv(attack_csv, id.str(), r, eps, split, false);
            }
            return kExitOk;
        }

        if (*foliate_cmd) {
            Network net = load_network(net_path);
            Box2 region = parse_region(region_vals);
            std::ofstream out(foliate_out);
            if (!out) throw FormatError("cannot open for writing: " + foliate_out);
            out << "trace,t,x1,x2,p\n";
            out.precision(17);
            const Vec2 span = region.hi - region.lo;
            int trace_id = 0;
            for (int iy = 0; iy < seed_grid; ++iy) {
                for (int ix = 0; ix < seed_grid; ++ix) {
                    const Vec2 x0(region.lo.x() + (ix + 0.5) * span.x() / seed_grid,
                                  region.lo.y() + (iy + 0.5) * span.y() / seed_grid);
                    try {
                        LeafTrace trace = trace_leaf(net, x0, step, n_steps,
                                                     TraceDirection::Both, &region);
                        for (std::size_t i = 0; i < trace.points.size(); ++i) {
                            const Vec2& p = trace.points[i];
                            out << trace_id << ',' << static_cast<double>(i) * step << ','
                                << p.x() << ',' << p.y() << ','
                                << forward(net, Vec(p))[1] << '\n';
                        }
                    } catch (const SingularPointError&) {
                        // skip singular seeds
                    }
                    ++trace_id;
                }
            }
            std::cout << "wrote " << foliate_out << "\n";
            return kExitOk;
        }

        if (*curv_cmd) {
            Network net = load_network(net_path);
            Box2 region = parse_region(region_vals);
            CurvatureGrid cg = curvature_grid(net, region, grid, grid, dx);
            std::ofstream out(curv_out);
            if (!out) throw FormatError("cannot open for writing: " + curv_out);
            out << "x1,x2,dtheta,singular\n";
            out.precision(17);
            const Vec2 span = region.hi - region.lo;
            for (int iy = 0; iy < cg.ny; ++iy) {
                for (int ix = 0; ix < cg.nx; ++ix) {
                    const std::size_t idx = static_cast<std::size_t>(iy) * cg.nx + ix;
                    out << region.lo.x() + (ix + 0.5) * span.x() / cg.nx << ','
                        << region.lo.y() + (iy + 0.5) * span.y() / cg.ny << ','
                        << cg.values[idx] << ',' << (cg.singular[idx] ? 1 : 0) << '\n';
                }
            }
            std::cout << "wrote " << curv_out << "\n";
            return kExitOk;
        }

        if (*sweep_cmd) {
            Network net = load_network(net_path);
            SweepConfig cfg;
            parse_budgets(budgets_spec, cfg);
            cfg.split = split;
            cfg.n_points = n_points;
            cfg.region = parse_region(region_vals);
            cfg.seed = seed;
            cfg.methods.clear();
            for (const std::string& m : method_names)
                cfg.methods.push_back(attack_method_from_name(m));
            std::vector<FoolingCurve> curves = run_sweep(cfg, net);
            write_curves_csv(curves, sweep_out);
            std::cout << "wrote " << sweep_out << "\n";
            return kExitOk;
        }

        if (*mn_cmd) {
            Network net = load_network(net_path);
            MnistSet set = load_mnist(images_path, labels_path, "test");
            if (image_index < 0 || static_cast<std::size_t>(image_index) >= set.size())
                throw FormatError("image index out of range");
            const Vec& img = set.images[image_index];
            AttackBudget budget{eps, split};
            AttackResult r = run_attack(net, img, attack_method_from_name(method_name),
                                        budget);
            print_attack(r);
            std::cout << "true label: " << set.labels[image_index] << "\n";
            write_pgm(img, out_prefix + "_original.pgm");
            write_pgm(img + r.total, out_prefix + "_attacked.pgm");
            std::cout << "wrote " << out_prefix << "_original.pgm and "
                      << out_prefix << "_attacked.pgm\n";
            if (!attack_csv.empty())
                append_attack_csv(attack_csv, std::to_string(image_index), r, eps, split,
                                  false);
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
