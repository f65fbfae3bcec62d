#pragma once

#include "msrcgr/alphabet.hpp"
#include "msrcgr/cgr.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msrcgr {

// Six trajectory statistics for one scale. Variances and the mean distance
// run over p_1..p_{n_k} (origin excluded), population form.
struct ScaleDescriptor {
    double final_x = 0;
    double final_y = 0;
    double n_k = 0;
    double var_x = 0;
    double var_y = 0;
    double mean_dist = 0;

    std::array<double, 6> values() const { return {final_x, final_y, n_k, var_x, var_y, mean_dist}; }
};

inline constexpr std::size_t kDescriptorWidth = 6;
inline constexpr std::size_t kCgrFeatureWidth = 24;

using CgrFeatureVector = std::array<double, kCgrFeatureWidth>;

// Column names k1_fx,k1_fy,k1_n,k1_vx,k1_vy,k1_d,...,k4_d.
std::vector<std::string> cgr_feature_names();

// Exact path: statistics accumulated over the rational points, converted last.
ScaleDescriptor scale_descriptor(const Trajectory& trajectory);

// Fixed-precision path: double midpoints over the same grid corners.
// For feature extraction only; never used to decode.
ScaleDescriptor scale_descriptor_fast(std::string_view sequence, Kind kind, unsigned k);

enum class FeaturePath { Fast, Exact };

// Scales 1..4 concatenated in order.
CgrFeatureVector cgr_feature_vector(std::string_view sequence, Kind kind, FeaturePath path = FeaturePath::Fast,
                                    AlphabetOptions options = {});

// Dense row-major matrix for small numeric work (z-scoring, fixtures).
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

// Train-set column statistics (population std).
struct NormStats {
    std::vector<double> mean;
    std::vector<double> std;

    std::size_t width() const noexcept { return mean.size(); }
    // 1/std, or 0 for columns below the zero-variance guard.
    double scale(std::size_t j) const noexcept;
};

inline constexpr double kZeroVarianceGuard = 1e-12;

NormStats zscore_fit(const DenseMatrix& x);
DenseMatrix zscore_apply(const DenseMatrix& x, const NormStats& stats);

}  // namespace msrcgr
