#ifndef TWEEN_THEOREMS_HPP
#define TWEEN_THEOREMS_HPP

#include <tween/criteria.hpp>
#include <tween/domain.hpp>
#include <tween/generators.hpp>
#include <tween/pareto.hpp>
#include <tween/random.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace tween {

inline constexpr double kBetaTieTolerance = 1e-12;

struct TheoremViolation {
    std::vector<std::size_t> indices;
    std::string detail;
};

struct TheoremReport {
    bool skipped = false;
    std::string skip_reason;
    std::size_t checked = 0;    // members (theorem 1) or pairs (theorem 2) examined
    std::size_t qualifying = 0; // theorem 2: pairs whose L1 gap exceeds 4/D
    std::vector<TheoremViolation> violations;

    [[nodiscard]] bool passed() const noexcept { return !skipped && violations.empty(); }
};

/// Indices whose beta is within `tol` of the set minimum.
[[nodiscard]] inline std::vector<std::size_t> beta_minimal_set(std::span<const CriteriaVector> pts, double tol = kBetaTieTolerance)
{
    std::vector<std::size_t> out;
    if (pts.empty()) return out;
    double lo = pts.front().beta;
    for (const auto& p : pts) lo = std::min(lo, p.beta);
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].beta - lo <= tol) out.push_back(i);
    return out;
}

namespace detail {

[[nodiscard]] inline bool precondition_unmet(std::span<const CriteriaVector> pts, const std::vector<std::size_t>& minimal,
                                             TheoremReport& report)
{
    if (pts.size() < 2) {
        report.skipped = true;
        report.skip_reason = "fewer than 2 candidates";
    } else if (minimal.size() < 2) {
        report.skipped = true;
        report.skip_reason = "beta-minimal set has fewer than 2 members";
    }
    return report.skipped;
}

} // namespace detail

/// Every candidate attaining the set-minimal beta must be nondominated.
[[nodiscard]] inline TheoremReport verify_theorem_1(std::span<const CriteriaVector> pts, const DominanceFn& dom = dominates)
{
    TheoremReport report;
    const auto minimal = beta_minimal_set(pts);
    if (detail::precondition_unmet(pts, minimal, report)) return report;
    const auto front = brute_force_pareto(pts, dom);
    for (auto b : minimal) {
        ++report.checked;
        if (!std::binary_search(front.begin(), front.end(), b)) {
            TheoremViolation v{{b}, "beta-minimal candidate " + std::to_string(b) + " is dominated"};
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (j != b && dom(pts[j], pts[b])) {
                    v.indices.push_back(j);
                    v.detail += " by " + std::to_string(j);
                    break;
                }
            report.violations.push_back(std::move(v));
        }
    }
    return report;
}

/// For every pair of beta-minimal candidates whose objective vectors are
/// more than 4/D apart in L1, the classifier labels must differ.
[[nodiscard]] inline TheoremReport verify_theorem_2(std::span<const CriteriaVector> pts, int classes)
{
    if (classes < 2) throw ValidationError("theorem 2 check needs D >= 2");
    TheoremReport report;
    const auto minimal = beta_minimal_set(pts);
    if (detail::precondition_unmet(pts, minimal, report)) return report;
    const double threshold = 4.0 / classes;
    for (std::size_t a = 0; a < minimal.size(); ++a)
        for (std::size_t b = a + 1; b < minimal.size(); ++b) {
            ++report.checked;
            const auto& p = pts[minimal[a]];
            const auto& q = pts[minimal[b]];
            const double gap = std::abs(p.f1 - q.f1) + std::abs(p.f2 - q.f2);
            if (gap > threshold) {
                ++report.qualifying;
                if (p.label == q.label)
                    report.violations.push_back({{minimal[a], minimal[b]},
                                                 "L1 gap " + format_double(gap) + " > 4/D with shared label " + std::to_string(p.label)});
            }
        }
    return report;
}

/// Randomized evaluated candidate set for the theorem checks: a fresh
/// boundary condition, between 2 and n/5 exactly anchored draws (beta = 0),
/// and the rest with endpoint offsets up to `loose_tolerance`.
[[nodiscard]] inline std::vector<CriteriaVector> random_candidate_set(std::shared_ptr<const SyntheticDomain> dom,
                                                                      const Classifier& model, std::size_t n,
                                                                      SeededStream rng, double loose_tolerance = 0.3)
{
    if (n < 2) throw ValidationError("candidate sets need at least 2 members");
    const LengthPolicy policy{};
    const PrimitiveMixtureGenerator exact(dom, policy, 0.05, 0.7, 0.0);
    const PrimitiveMixtureGenerator loose(dom, policy, 0.05, 0.7, loose_tolerance);
    const auto cond = make_condition(*dom, 5, rng.child(0));
    const int y_len = estimate_transition_length(boundary_similarity(cond), policy);
    const int hi = std::max<int>(2, static_cast<int>(n / 5));
    const auto anchored = static_cast<std::size_t>(rng.uniform_int(2, hi));
    std::vector<CriteriaVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto sub = rng.child(i + 1);
        const Generator& gen = i < anchored ? static_cast<const Generator&>(exact) : loose;
        out.push_back(evaluate_criteria(gen.sample_initial(cond, y_len, sub), cond, model));
    }
    return out;
}

/// Deliberately wrong dominance (ignores f2), for checking that the theorem
/// detector fires.
[[nodiscard]] inline bool faulty_dominates(const CriteriaVector& a, const CriteriaVector& b) { return a.f1 < b.f1; }

} // namespace tween

#endif
