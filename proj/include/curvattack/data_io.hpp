#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvattack/network.hpp"
#include "curvattack/types.hpp"

namespace curvattack {

/// 28x28 grayscale image set with pixels scaled to [0,1].
struct MnistSet {
    std::vector<Vec> images;  // 784 values each
    std::vector<int> labels;  // 0..9
    std::string split;        // "train" or "test"

    std::size_t size() const { return images.size(); }
    Dataset as_dataset() const { return Dataset{images, labels}; }
};

/// Parses an IDX image file (big-endian, magic 0x00000803). Pixels are
/// divided by 255. Format errors name the offending byte offset.
std::vector<Vec> load_idx_images(const std::string& path);

/// Parses an IDX label file (magic 0x00000801).
std::vector<int> load_idx_labels(const std::string& path);

MnistSet load_mnist(const std::string& image_path, const std::string& label_path,
                    const std::string& split);

/// Writers for the same formats, used for round-trip tests and dataset
/// generation.
void write_idx_images(const std::vector<Vec>& images, const std::string& path);
void write_idx_labels(const std::vector<int>& labels, const std::string& path);

/// The four-corner truth tables from the toy tasks.
Dataset xor_dataset();
Dataset or_dataset();

/// Random points in [0,1]^2 labelled by the XOR of the rounded coordinates;
/// the training distribution used for the toy experiments.
Dataset xor_region_dataset(int n, std::uint64_t seed);

struct PointPopulation {
    std::vector<Vec2> points;
    Box2 region;
    std::uint64_t seed = 0;
};

/// n points uniform per-axis inside the region; deterministic given the seed.
PointPopulation sample_uniform(const Box2& region, int n, std::uint64_t seed);

/// Binary PGM (P5), 28x28, maxval 255. Values are clamped to [0,255] after
/// scaling by 255 and rounding half-up; clamping here is display-only.
void write_pgm(const Vec& image, const std::string& path);

Vec read_pgm(const std::string& path);

}  // namespace curvattack
