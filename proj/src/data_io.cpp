#include "curvattack/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace curvattack {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset,
                        const std::string& path) {
    if (offset + 4 > buf.size())
        throw FormatError(path + ": truncated at byte offset " + std::to_string(offset));
    return (static_cast<std::uint32_t>(buf[offset]) << 24) |
           (static_cast<std::uint32_t>(buf[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(buf[offset + 2]) << 8) |
           static_cast<std::uint32_t>(buf[offset + 3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {static_cast<unsigned char>(v >> 24),
                                    static_cast<unsigned char>(v >> 16),
                                    static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

}  // namespace

std::vector<Vec> load_idx_images(const std::string& path) {
    const auto buf = read_all(path);
    const std::uint32_t magic = read_be32(buf, 0, path);
    if (magic != kImageMagic) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "bad image magic 0x%08x at byte offset 0", magic);
        throw FormatError(path + ": " + msg);
    }
    const std::uint32_t count = read_be32(buf, 4, path);
    const std::uint32_t rows = read_be32(buf, 8, path);
    const std::uint32_t cols = read_be32(buf, 12, path);
    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    const std::size_t need = 16 + static_cast<std::size_t>(count) * pixels;
    if (buf.size() < need)
        throw FormatError(path + ": truncated at byte offset " + std::to_string(buf.size()));

    std::vector<Vec> images;
    images.reserve(count);
    std::size_t offset = 16;
    for (std::uint32_t i = 0; i < count; ++i) {
        Vec img(static_cast<Eigen::Index>(pixels));
        for (std::size_t p = 0; p < pixels; ++p)
            img[static_cast<Eigen::Index>(p)] = buf[offset + p] / 255.0;
        images.push_back(std::move(img));
        offset += pixels;
    }
    return images;
}

std::vector<int> load_idx_labels(const std::string& path) {
    const auto buf = read_all(path);
    const std::uint32_t magic = read_be32(buf, 0, path);
    if (magic != kLabelMagic) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "bad label magic 0x%08x at byte offset 0", magic);
        throw FormatError(path + ": " + msg);
    }
    const std::uint32_t count = read_be32(buf, 4, path);
    if (buf.size() < 8 + count)
        throw FormatError(path + ": truncated at byte offset " + std::to_string(buf.size()));
    std::vector<int> labels(count);
    for (std::uint32_t i = 0; i < count; ++i) labels[i] = buf[8 + i];
    return labels;
}

MnistSet load_mnist(const std::string& image_path, const std::string& label_path,
                    const std::string& split) {
    MnistSet set;
    set.images = load_idx_images(image_path);
    set.labels = load_idx_labels(label_path);
    set.split = split;
    if (set.images.size() != set.labels.size())
        throw FormatError("image/label count mismatch: " + std::to_string(set.images.size()) +
                          " vs " + std::to_string(set.labels.size()));
    return set;
}

void write_idx_images(const std::vector<Vec>& images, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path);
    write_be32(out, kImageMagic);
    write_be32(out, static_cast<std::uint32_t>(images.size()));
    write_be32(out, 28);
    write_be32(out, 28);
    for (const Vec& img : images) {
        for (Eigen::Index p = 0; p < img.size(); ++p) {
            const double scaled = std::floor(img[p] * 255.0 + 0.5);
            const unsigned char byte =
                static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
            out.write(reinterpret_cast<const char*>(&byte), 1);
        }
    }
}

void write_idx_labels(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path);
    write_be32(out, kLabelMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int label : labels) {
        const unsigned char byte = static_cast<unsigned char>(label);
        out.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

Dataset xor_dataset() {
    Dataset data;
    data.inputs = {Vec2(0, 0), Vec2(0, 1), Vec2(1, 0), Vec2(1, 1)};
    data.labels = {0, 1, 1, 0};
    return data;
}

Dataset or_dataset() {
    Dataset data;
    data.inputs = {Vec2(0, 0), Vec2(0, 1), Vec2(1, 0), Vec2(1, 1)};
    data.labels = {0, 1, 1, 1};
    return data;
}

Dataset xor_region_dataset(int n, std::uint64_t seed) {
    Dataset data;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        data.inputs.push_back(Vec2(x, y));
        data.labels.push_back((x > 0.5) != (y > 0.5) ? 1 : 0);
    }
    return data;
}

PointPopulation sample_uniform(const Box2& region, int n, std::uint64_t seed) {
    PointPopulation pop;
    pop.region = region;
    pop.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(region.lo.x(), region.hi.x());
    std::uniform_real_distribution<double> uy(region.lo.y(), region.hi.y());
    pop.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        pop.points.emplace_back(x, y);
    }
    return pop;
}

void write_pgm(const Vec& image, const std::string& path) {
    if (image.size() != 784) throw DimensionError("write_pgm: expected 784 values");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << "P5\n28 28\n255\n";
    for (Eigen::Index p = 0; p < image.size(); ++p) {
        const double scaled = std::floor(image[p] * 255.0 + 0.5);
        const unsigned char byte = static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
        out.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

Vec read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || w != 28 || h != 28 || maxval != 255)
        throw FormatError(path + ": not a 28x28 P5 PGM");
    in.get();  // single whitespace after maxval
    Vec image(784);
    for (Eigen::Index p = 0; p < 784; ++p) {
        const int byte = in.get();
        if (byte < 0) throw FormatError(path + ": truncated pixel data");
        image[p] = byte / 255.0;
    }
    return image;
}

}  // namespace curvattack
