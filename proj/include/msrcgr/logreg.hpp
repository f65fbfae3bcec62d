#pragma once

#include "msrcgr/feature_matrix.hpp"
#include "msrcgr/features.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msrcgr {

// Mean cross-entropy of a softmax model plus (lambda / 2N) * ||W||^2, with the
// bias unregularised. Features are z-scored on the fly from raw sparse rows:
// z_ij = (x_ij - mean_j) * scale_j, so the normalised matrix is never built.
//
// Parameter layout: W as C x D row-major, followed by the C biases.
class LogisticObjective {
public:
    LogisticObjective(const FeatureMatrix& x, std::vector<std::size_t> targets, std::size_t classes,
                      const NormStats& stats, double lambda);

    std::size_t classes() const noexcept { return classes_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t parameter_count() const noexcept { return classes_ * dim_ + classes_; }

    double loss(std::span<const double> params) const;
    double loss_and_gradient(std::span<const double> params, std::span<double> gradient) const;

private:
    double evaluate(std::span<const double> params, std::span<double> gradient, bool want_gradient) const;

    const FeatureMatrix& x_;
    std::vector<std::size_t> targets_;
    std::size_t classes_;
    std::size_t dim_;
    const NormStats& stats_;
    double lambda_;
};

struct LogRegOptions {
    double lambda = 1.0;
    unsigned max_iter = 500;
    double tol = 1e-6;
};

struct LogRegModel {
    std::vector<std::string> classes;
    std::vector<std::string> columns;
    NormStats norm_stats;
    double lambda = 1.0;
    std::vector<double> weights;  // C x D row-major, normalised feature space
    std::vector<double> bias;
    double final_loss = 0;
    unsigned iterations = 0;
    double gradient_norm = 0;

    std::size_t dim() const noexcept { return columns.size(); }

    // Class probabilities for row r of a raw (un-normalised) matrix.
    std::vector<double> predict_proba(const FeatureMatrix& x, std::size_t r) const;
    std::vector<std::size_t> predict(const FeatureMatrix& x) const;

    std::string to_json() const;
    static LogRegModel from_json(std::string_view json);
};

// Fits z-score statistics on x, then runs deterministic full-batch gradient
// descent with Armijo backtracking. Classes are the sorted distinct labels.
LogRegModel train_logreg(const FeatureMatrix& x, const LogRegOptions& options = {});

struct Metrics {
    std::vector<std::string> classes;
    double accuracy = 0;
    double precision = 0;  // support-weighted
    double recall = 0;
    double f1 = 0;
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]

    std::string to_json() const;
};

// Weighted metrics from a confusion matrix. A class that is never predicted
// contributes precision 0.
Metrics metrics_from_confusion(std::vector<std::string> classes, std::vector<std::vector<std::size_t>> confusion);

Metrics evaluate(const LogRegModel& model, const FeatureMatrix& x_test);

}  // namespace msrcgr
