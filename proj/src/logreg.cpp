#include "msrcgr/logreg.hpp"

#include "msrcgr/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace msrcgr {

LogisticObjective::LogisticObjective(const FeatureMatrix& x, std::vector<std::size_t> targets, std::size_t classes,
                                     const NormStats& stats, double lambda)
    : x_(x), targets_(std::move(targets)), classes_(classes), dim_(x.cols()), stats_(stats), lambda_(lambda) {
    if (targets_.size() != x.rows()) throw Error(ErrorCode::Dimension, "one target per row required");
    if (stats.width() != dim_) throw Error(ErrorCode::Dimension, "normalisation stats do not match feature width");
    if (x.rows() == 0) throw Error(ErrorCode::DegenerateLabels, "no training rows");
}

double LogisticObjective::loss(std::span<const double> params) const {
    return evaluate(params, {}, false);
}

double LogisticObjective::loss_and_gradient(std::span<const double> params, std::span<double> gradient) const {
    return evaluate(params, gradient, true);
}

double LogisticObjective::evaluate(std::span<const double> params, std::span<double> gradient,
                                   bool want_gradient) const {
    const std::size_t C = classes_;
    const std::size_t D = dim_;
    if (params.size() != parameter_count() || (want_gradient && gradient.size() != parameter_count()))
        throw Error(ErrorCode::Dimension, "parameter vector has the wrong length");
    const auto n = static_cast<double>(x_.rows());

    // Fold normalisation into the weights: scaled[j*C + c] = W[c][j] * scale_j.
    std::vector<double> scaled(D * C);
    std::vector<double> offset(C, 0.0);
    double norm2 = 0.0;
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t j = 0; j < D; ++j) {
            const double w = params[c * D + j];
            norm2 += w * w;
            const double s = w * stats_.scale(j);
            scaled[j * C + c] = s;
            offset[c] += stats_.mean[j] * s;
        }
    const double* bias = params.data() + C * D;

    std::vector<double> acc;     // D x C, sum_i r_ic x_ij
    std::vector<double> rsum;    // C, sum_i r_ic
    if (want_gradient) {
        acc.assign(D * C, 0.0);
        rsum.assign(C, 0.0);
    }
    std::vector<double> logits(C);
    double total = 0.0;
    for (std::size_t i = 0; i < x_.rows(); ++i) {
        for (std::size_t c = 0; c < C; ++c) logits[c] = bias[c] - offset[c];
        const auto row = x_.row(i);
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
            const double* w = scaled.data() + static_cast<std::size_t>(row.cols[k]) * C;
            const double v = row.values[k];
            for (std::size_t c = 0; c < C; ++c) logits[c] += v * w[c];
        }
        const double mx = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            logits[c] = std::exp(logits[c] - mx);
            z += logits[c];
        }
        const std::size_t y = targets_[i];
        total += std::log(z) - std::log(logits[y]);
        if (!want_gradient) continue;
        for (std::size_t c = 0; c < C; ++c) logits[c] = logits[c] / z - (c == y ? 1.0 : 0.0);
        for (std::size_t c = 0; c < C; ++c) rsum[c] += logits[c];
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
            double* a = acc.data() + static_cast<std::size_t>(row.cols[k]) * C;
            const double v = row.values[k];
            for (std::size_t c = 0; c < C; ++c) a[c] += v * logits[c];
        }
    }
    const double value = total / n + lambda_ / (2.0 * n) * norm2;
    if (want_gradient) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t j = 0; j < D; ++j) {
                const double data_term = stats_.scale(j) * (acc[j * C + c] - stats_.mean[j] * rsum[c]);
                gradient[c * D + j] = (data_term + lambda_ * params[c * D + j]) / n;
            }
            gradient[C * D + c] = rsum[c] / n;
        }
    }
    return value;
}

namespace {

std::vector<std::size_t> class_targets(const std::vector<std::string>& labels, const std::vector<std::string>& classes) {
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < classes.size(); ++c) index.emplace(classes[c], c);
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
        const auto it = index.find(l);
        if (it == index.end()) throw Error(ErrorCode::Dimension, "label '" + l + "' is not one of the model's classes");
        out.push_back(it->second);
    }
    return out;
}

double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return s;
}

}  // namespace

LogRegModel train_logreg(const FeatureMatrix& x, const LogRegOptions& options) {
    if (!(options.lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
    const std::set<std::string> distinct(x.labels().begin(), x.labels().end());
    if (distinct.size() < 2)
        throw Error(ErrorCode::DegenerateLabels,
                    "training data has " + std::to_string(distinct.size()) + " distinct label(s); at least 2 needed");

    LogRegModel model;
    model.classes.assign(distinct.begin(), distinct.end());
    model.columns = x.columns();
    model.lambda = options.lambda;
    model.norm_stats = zscore_fit(x);

    const LogisticObjective objective(x, class_targets(x.labels(), model.classes), model.classes.size(),
                                      model.norm_stats, options.lambda);
    std::vector<double> params(objective.parameter_count(), 0.0);
    std::vector<double> grad(params.size());
    std::vector<double> trial(params.size());

    double f = objective.loss_and_gradient(params, grad);
    double g2 = squared_norm(grad);
    double step = 1.0;
    unsigned it = 0;
    constexpr double kArmijo = 1e-4;
    for (; it < options.max_iter && std::sqrt(g2) >= options.tol; ++it) {
        step = std::min(step * 2.0, 1e6);
        double f_trial = 0;
        bool accepted = false;
        while (step > 1e-16) {
            for (std::size_t i = 0; i < params.size(); ++i) trial[i] = params[i] - step * grad[i];
            f_trial = objective.loss(trial);
            if (std::isfinite(f_trial) && f_trial <= f - kArmijo * step * g2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent possible at machine precision
        params.swap(trial);
        f = objective.loss_and_gradient(params, grad);
        if (!std::isfinite(f)) throw Error(ErrorCode::Divergence, "training loss became non-finite");
        g2 = squared_norm(grad);
    }

    const std::size_t C = model.classes.size();
    const std::size_t D = model.dim();
    model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(C * D));
    model.bias.assign(params.begin() + static_cast<std::ptrdiff_t>(C * D), params.end());
    model.final_loss = f;
    model.iterations = it;
    model.gradient_norm = std::sqrt(g2);
    return model;
}

std::vector<double> LogRegModel::predict_proba(const FeatureMatrix& x, std::size_t r) const {
    const std::size_t C = classes.size();
    const std::size_t D = dim();
    if (x.cols() != D)
        throw Error(ErrorCode::Dimension,
                    "matrix has " + std::to_string(x.cols()) + " columns, model expects " + std::to_string(D));
    std::vector<double> z(D, 0.0);
    const auto row = x.row(r);
    for (std::size_t k = 0; k < row.cols.size(); ++k) z[row.cols[k]] = row.values[k];
    for (std::size_t j = 0; j < D; ++j) z[j] = (z[j] - norm_stats.mean[j]) * norm_stats.scale(j);
    std::vector<double> p(C);
    for (std::size_t c = 0; c < C; ++c) {
        double s = bias[c];
        for (std::size_t j = 0; j < D; ++j) s += weights[c * D + j] * z[j];
        p[c] = s;
    }
    const double mx = *std::max_element(p.begin(), p.end());
    double total = 0.0;
    for (auto& v : p) {
        v = std::exp(v - mx);
        total += v;
    }
    for (auto& v : p) v /= total;
    return p;
}

std::vector<std::size_t> LogRegModel::predict(const FeatureMatrix& x) const {
    std::vector<std::size_t> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto p = predict_proba(x, r);
        out[r] = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    }
    return out;
}

std::string LogRegModel::to_json() const {
    nlohmann::ordered_json j;
    j["classes"] = classes;
    j["columns"] = columns;
    j["lambda"] = lambda;
    j["norm_stats"] = {{"mean", norm_stats.mean}, {"std", norm_stats.std}};
    j["weights"] = weights;
    j["bias"] = bias;
    j["final_loss"] = final_loss;
    j["iterations"] = iterations;
    j["gradient_norm"] = gradient_norm;
    return j.dump();
}

LogRegModel LogRegModel::from_json(std::string_view json) {
    LogRegModel m;
    try {
        const auto j = nlohmann::json::parse(json);
        j.at("classes").get_to(m.classes);
        j.at("columns").get_to(m.columns);
        m.lambda = j.at("lambda").get<double>();
        j.at("norm_stats").at("mean").get_to(m.norm_stats.mean);
        j.at("norm_stats").at("std").get_to(m.norm_stats.std);
        j.at("weights").get_to(m.weights);
        j.at("bias").get_to(m.bias);
        m.final_loss = j.value("final_loss", 0.0);
        m.iterations = j.value("iterations", 0u);
        m.gradient_norm = j.value("gradient_norm", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("model JSON: ") + e.what());
    }
    const std::size_t C = m.classes.size();
    const std::size_t D = m.columns.size();
    if (C < 2 || m.bias.size() != C || m.weights.size() != C * D || m.norm_stats.mean.size() != D ||
        m.norm_stats.std.size() != D)
        throw Error(ErrorCode::Parse, "model JSON has inconsistent dimensions");
    return m;
}

Metrics metrics_from_confusion(std::vector<std::string> classes, std::vector<std::vector<std::size_t>> confusion) {
    const std::size_t C = classes.size();
    if (confusion.size() != C) throw Error(ErrorCode::Dimension, "confusion matrix does not match class count");
    for (const auto& row : confusion)
        if (row.size() != C) throw Error(ErrorCode::Dimension, "confusion matrix must be square");

    Metrics m;
    std::size_t total = 0, correct = 0;
    std::vector<std::size_t> predicted(C, 0);
    for (std::size_t t = 0; t < C; ++t)
        for (std::size_t p = 0; p < C; ++p) {
            total += confusion[t][p];
            predicted[p] += confusion[t][p];
            if (t == p) correct += confusion[t][p];
        }
    if (total > 0) {
        m.accuracy = static_cast<double>(correct) / static_cast<double>(total);
        for (std::size_t c = 0; c < C; ++c) {
            const std::size_t support = std::accumulate(confusion[c].begin(), confusion[c].end(), std::size_t{0});
            if (support == 0) continue;
            const auto tp = static_cast<double>(confusion[c][c]);
            const double precision = predicted[c] == 0 ? 0.0 : tp / static_cast<double>(predicted[c]);
            const double recall = tp / static_cast<double>(support);
            const double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
            const double w = static_cast<double>(support) / static_cast<double>(total);
            m.precision += w * precision;
            m.recall += w * recall;
            m.f1 += w * f1;
        }
    }
    m.classes = std::move(classes);
    m.confusion = std::move(confusion);
    return m;
}

Metrics evaluate(const LogRegModel& model, const FeatureMatrix& x_test) {
    if (x_test.cols() != model.dim())
        throw Error(ErrorCode::Dimension, "test matrix has " + std::to_string(x_test.cols()) +
                                              " columns, model expects " + std::to_string(model.dim()));
    const auto truth = class_targets(x_test.labels(), model.classes);
    const auto predicted = model.predict(x_test);
    const std::size_t C = model.classes.size();
    std::vector<std::vector<std::size_t>> confusion(C, std::vector<std::size_t>(C, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) ++confusion[truth[i]][predicted[i]];
    return metrics_from_confusion(model.classes, std::move(confusion));
}

std::string Metrics::to_json() const {
    nlohmann::ordered_json j;
    j["classes"] = classes;
    j["accuracy"] = accuracy;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f1"] = f1;
    j["confusion"] = confusion;
    return j.dump();
}

}  // namespace msrcgr
