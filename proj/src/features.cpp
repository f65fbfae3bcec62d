#include "msrcgr/features.hpp"

#include "msrcgr/error.hpp"

#include <cmath>

namespace msrcgr {

std::vector<std::string> cgr_feature_names() {
    static constexpr std::array<const char*, kDescriptorWidth> suffix{"fx", "fy", "n", "vx", "vy", "d"};
    std::vector<std::string> names;
    names.reserve(kCgrFeatureWidth);
    for (unsigned k = 1; k <= 4; ++k)
        for (const char* s : suffix) names.push_back("k" + std::to_string(k) + "_" + s);
    return names;
}

ScaleDescriptor scale_descriptor(const Trajectory& trajectory) {
    const std::size_t n = trajectory.steps();
    if (n == 0) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no steps");

    // Points are dyadic, so these sums stay cheap and exact.
    mpq_class sum_x, sum_y, sum_xx, sum_yy;
    double dist = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        const auto& p = trajectory.points[t];
        sum_x += p.x.raw();
        sum_y += p.y.raw();
        sum_xx += p.x.raw() * p.x.raw();
        sum_yy += p.y.raw() * p.y.raw();
        const double px = p.x.to_double();
        const double py = p.y.to_double();
        dist += std::sqrt(px * px + py * py);
    }
    const mpq_class count(static_cast<unsigned long>(n));
    const mpq_class mean_x = sum_x / count;
    const mpq_class mean_y = sum_y / count;
    const mpq_class var_x = sum_xx / count - mean_x * mean_x;
    const mpq_class var_y = sum_yy / count - mean_y * mean_y;

    ScaleDescriptor d;
    d.final_x = trajectory.points.back().x.to_double();
    d.final_y = trajectory.points.back().y.to_double();
    d.n_k = static_cast<double>(n);
    d.var_x = var_x.get_d();
    d.var_y = var_y.get_d();
    d.mean_dist = dist / static_cast<double>(n);
    return d;
}

ScaleDescriptor scale_descriptor_fast(std::string_view sequence, Kind kind, unsigned k) {
    const FloatCorners& corners = float_corners(kind, k);
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "scale k must be at least 1");
    if (sequence.size() < k)
        throw Error(ErrorCode::SequenceTooShort, "sequence of length " + std::to_string(sequence.size()) +
                                                     " is shorter than scale k=" + std::to_string(k));
    const std::uint64_t m = base_symbols(kind).size();
    const std::uint64_t size = corners.x.size();

    double x = 0, y = 0;
    // Welford accumulation over p_1..p_{n_k}.
    double mean_x = 0, mean_y = 0, m2_x = 0, m2_y = 0, dist = 0;
    std::size_t n = 0;
    std::uint64_t rolling = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const int s = symbol_index(kind, sequence[i]);
        if (s < 0)
            throw Error(ErrorCode::InvalidToken,
                        "invalid " + std::string(kind_name(kind)) + " symbol '" + std::string(1, sequence[i]) +
                            "' at sequence position " + std::to_string(i),
                        i);
        rolling = (rolling * m + static_cast<std::uint64_t>(s)) % size;
        if (i + 1 < k) continue;
        x = 0.5 * (x + corners.x[rolling]);
        y = 0.5 * (y + corners.y[rolling]);
        ++n;
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        mean_x += dx / static_cast<double>(n);
        mean_y += dy / static_cast<double>(n);
        m2_x += dx * (x - mean_x);
        m2_y += dy * (y - mean_y);
        dist += std::sqrt(x * x + y * y);
    }

    ScaleDescriptor d;
    d.final_x = x;
    d.final_y = y;
    d.n_k = static_cast<double>(n);
    d.var_x = m2_x / static_cast<double>(n);
    d.var_y = m2_y / static_cast<double>(n);
    d.mean_dist = dist / static_cast<double>(n);
    return d;
}

CgrFeatureVector cgr_feature_vector(std::string_view sequence, Kind kind, FeaturePath path,
                                    AlphabetOptions options) {
    if (sequence.size() < kDefaultScales.back())
        throw Error(ErrorCode::SequenceTooShort, "sequence of length " + std::to_string(sequence.size()) +
                                                     " is shorter than the largest scale " +
                                                     std::to_string(kDefaultScales.back()));
    CgrFeatureVector out{};
    std::size_t offset = 0;
    for (const unsigned k : kDefaultScales) {
        ScaleDescriptor d;
        if (path == FeaturePath::Fast) {
            d = scale_descriptor_fast(sequence, kind, k);
        } else {
            const auto table = shared_corner_table(kind, k, options);
            d = scale_descriptor(encode_scale(sequence, k, *table));
        }
        for (const double v : d.values()) out[offset++] = v;
    }
    return out;
}

double NormStats::scale(std::size_t j) const noexcept {
    return std[j] < kZeroVarianceGuard ? 0.0 : 1.0 / std[j];
}

NormStats zscore_fit(const DenseMatrix& x) {
    NormStats stats;
    stats.mean.assign(x.cols, 0.0);
    stats.std.assign(x.cols, 0.0);
    if (x.rows == 0) return stats;
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c) stats.mean[c] += x(r, c);
    for (auto& m : stats.mean) m /= static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double d = x(r, c) - stats.mean[c];
            stats.std[c] += d * d;
        }
    for (auto& s : stats.std) s = std::sqrt(s / static_cast<double>(x.rows));
    return stats;
}

DenseMatrix zscore_apply(const DenseMatrix& x, const NormStats& stats) {
    if (x.cols != stats.width())
        throw Error(ErrorCode::Dimension, "matrix has " + std::to_string(x.cols) + " columns, normalisation stats have " +
                                              std::to_string(stats.width()));
    DenseMatrix out(x.rows, x.cols);
    for (std::size_t c = 0; c < x.cols; ++c) {
        const double inv = stats.scale(c);
        for (std::size_t r = 0; r < x.rows; ++r) out(r, c) = (x(r, c) - stats.mean[c]) * inv;
    }
    return out;
}

}  // namespace msrcgr
