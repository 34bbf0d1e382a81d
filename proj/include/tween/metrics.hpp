#ifndef TWEEN_METRICS_HPP
#define TWEEN_METRICS_HPP

#include <tween/criteria.hpp>
#include <tween/errors.hpp>
#include <tween/motion.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>
#include <vector>

namespace tween {

/// Per joint: mean distance from the origin, mean per-step speed, and total
/// positional variance. Layout [pos_mean(J) | vel_mean(J) | pos_var(J)].
[[nodiscard]] inline std::vector<double> extract_features(const MotionSequence& seq)
{
    const int joints = seq.joints();
    const std::size_t t_len = seq.length();
    std::vector<double> feat(static_cast<std::size_t>(joints) * 3, 0.0);
    for (int j = 0; j < joints; ++j) {
        double pos = 0.0;
        double mean[3] = {0.0, 0.0, 0.0};
        for (std::size_t t = 0; t < t_len; ++t) {
            double r = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double c = seq[t].at(j, a);
                mean[a] += c / static_cast<double>(t_len);
                r += c * c;
            }
            pos += std::sqrt(r);
        }
        double vel = 0.0;
        for (std::size_t t = 1; t < t_len; ++t) {
            double d = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double s = seq[t].at(j, a) - seq[t - 1].at(j, a);
                d += s * s;
            }
            vel += std::sqrt(d);
        }
        double var = 0.0;
        for (std::size_t t = 0; t < t_len; ++t)
            for (int a = 0; a < 3; ++a) {
                const double c = seq[t].at(j, a) - mean[a];
                var += c * c;
            }
        feat[j] = pos / static_cast<double>(t_len);
        feat[joints + j] = t_len > 1 ? vel / static_cast<double>(t_len - 1) : 0.0;
        feat[2 * joints + j] = var / static_cast<double>(t_len);
    }
    return feat;
}

struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

inline constexpr double kCovarianceRidge = 1e-6;

/// Sample mean and unbiased covariance; adds 1e-6 I when the sample count
/// does not exceed the dimension.
[[nodiscard]] inline GaussianSummary summarize(std::span<const std::vector<double>> features)
{
    if (features.empty()) throw RangeError("cannot summarize an empty feature set");
    const auto dim = static_cast<Eigen::Index>(features.front().size());
    const auto n = static_cast<Eigen::Index>(features.size());
    Eigen::MatrixXd x(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(features[i].size()) != dim) throw DimensionError("feature vectors differ in length");
        x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(features[i].data(), dim);
    }
    GaussianSummary s;
    s.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd centered = x.rowwise() - s.mean.transpose();
    s.covariance = n > 1 ? Eigen::MatrixXd((centered.transpose() * centered) / static_cast<double>(n - 1))
                         : Eigen::MatrixXd::Zero(dim, dim);
    if (n <= dim) s.covariance += kCovarianceRidge * Eigen::MatrixXd::Identity(dim, dim);
    return s;
}

[[nodiscard]] inline GaussianSummary summarize(std::span<const MotionSequence> set)
{
    std::vector<std::vector<double>> feats;
    feats.reserve(set.size());
    for (const auto& s : set) feats.push_back(extract_features(s));
    return summarize(std::span<const std::vector<double>>(feats));
}

namespace detail {

inline constexpr double kPsdTolerance = 1e-9;

[[nodiscard]] inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> checked_eigen(const Eigen::MatrixXd& m, const char* what)
{
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kPsdTolerance)
        throw NumericalError(std::string(what) + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError(std::string("eigendecomposition failed for ") + what);
    if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -kPsdTolerance)
        throw NumericalError(std::string(what) + " is not positive semidefinite");
    return es;
}

[[nodiscard]] inline Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, const char* what)
{
    const auto es = checked_eigen(m, what);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

} // namespace detail

/// |mu_a - mu_b|^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}). The trace of the
/// product root is taken from the symmetric form (S_a^{1/2} S_b S_a^{1/2})^{1/2}.
[[nodiscard]] inline double fid(const GaussianSummary& a, const GaussianSummary& b)
{
    if (a.mean.size() != b.mean.size() || a.covariance.rows() != b.covariance.rows())
        throw DimensionError("Gaussian summaries differ in dimension");
    const Eigen::MatrixXd root_a = detail::psd_sqrt(a.covariance, "first covariance");
    (void)detail::checked_eigen(b.covariance, "second covariance");
    Eigen::MatrixXd inner = root_a * b.covariance * root_a;
    inner = 0.5 * (inner + inner.transpose());
    const auto es = detail::checked_eigen(inner, "covariance product");
    const double trace_root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    const double value = (a.mean - b.mean).squaredNorm() + a.covariance.trace() + b.covariance.trace() - 2.0 * trace_root;
    return std::max(value, 0.0);
}

/// Mean L2 distance over ordered pairs i != j of flattened sequences.
[[nodiscard]] inline double apd(std::span<const MotionSequence> set)
{
    const std::size_t n = set.size();
    if (n < 2) throw RangeError("APD needs at least 2 sequences");
    std::vector<std::vector<double>> flat;
    flat.reserve(n);
    for (const auto& s : set) flat.push_back(s.flatten());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (flat[i].size() != flat[j].size()) throw DimensionError("APD sequences differ in shape");
            double acc = 0.0;
            for (std::size_t k = 0; k < flat[i].size(); ++k) acc += (flat[i][k] - flat[j][k]) * (flat[i][k] - flat[j][k]);
            total += 2.0 * std::sqrt(acc);
        }
    return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

/// min over predictions of the mean per-frame pose L2 error against gt.
[[nodiscard]] inline double ade(std::span<const MotionSequence> preds, const MotionSequence& gt)
{
    if (preds.empty()) throw RangeError("ADE needs at least one prediction");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : preds) {
        if (p.length() != gt.length() || p.joints() != gt.joints())
            throw DimensionError("ADE prediction shape does not match ground truth");
        double acc = 0.0;
        for (std::size_t t = 0; t < gt.length(); ++t) acc += distance(p[t], gt[t]);
        best = std::min(best, acc / static_cast<double>(gt.length()));
    }
    return best;
}

/// Fraction of sequences whose predicted class equals their intended label.
[[nodiscard]] inline double acc(std::span<const MotionSequence> set, const Classifier& model)
{
    if (set.empty()) throw RangeError("ACC needs a nonempty set");
    std::size_t hits = 0;
    for (const auto& s : set) {
        if (!s.intended_label()) throw MissingLabelError("sequence carries no intended label");
        hits += model.classify(s).label == *s.intended_label() ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(set.size());
}

/// Number of distinct predicted labels.
[[nodiscard]] inline int class_coverage(std::span<const MotionSequence> set, const Classifier& model)
{
    if (set.empty()) throw RangeError("class coverage needs a nonempty set");
    std::set<int> labels;
    for (const auto& s : set) labels.insert(model.classify(s).label);
    return static_cast<int>(labels.size());
}

} // namespace tween

#endif
