#ifndef TWEEN_PARETO_HPP
#define TWEEN_PARETO_HPP

#include <tween/criteria.hpp>
#include <tween/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace tween {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using Front = std::vector<std::size_t>;

/// Pareto dominance on (f1, f2) under minimization. Exact float comparison.
[[nodiscard]] inline bool dominates(const CriteriaVector& a, const CriteriaVector& b)
{
    if (std::isnan(a.f1) || std::isnan(a.f2) || std::isnan(b.f1) || std::isnan(b.f2))
        throw InvalidCriteriaError("NaN objective in dominance check");
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

using DominanceFn = std::function<bool(const CriteriaVector&, const CriteriaVector&)>;

struct Individual {
    MotionSequence seq;
    CriteriaVector criteria;
    int rank = 0;
    double crowding = 0.0;

    friend bool operator==(const Individual&, const Individual&) = default;
};

struct Population {
    std::vector<Individual> members;
    std::size_t capacity = 0;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
    friend bool operator==(const Population&, const Population&) = default;
};

/// Deb's fast nondominated sort. Members of each front are listed in
/// ascending index order.
[[nodiscard]] inline std::vector<Front> fast_nondominated_sort(std::span<const CriteriaVector> pts)
{
    const std::size_t n = pts.size();
    if (n == 0) throw EmptyPopulationError("cannot sort an empty population");
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(pts[p], pts[q])) {
                dominated[p].push_back(q);
                ++count[q];
            } else if (dominates(pts[q], pts[p])) {
                dominated[q].push_back(p);
                ++count[p];
            }
        }
    }
    std::vector<Front> fronts;
    Front current;
    for (std::size_t p = 0; p < n; ++p)
        if (count[p] == 0) current.push_back(p);
    while (!current.empty()) {
        Front next;
        for (auto p : current)
            for (auto q : dominated[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

[[nodiscard]] inline std::vector<CriteriaVector> criteria_of(std::span<const Individual> pop)
{
    std::vector<CriteriaVector> out;
    out.reserve(pop.size());
    for (const auto& ind : pop) out.push_back(ind.criteria);
    return out;
}

/// Sorts and writes each member's front index into its rank field.
inline std::vector<Front> fast_nondominated_sort(std::span<Individual> pop)
{
    const auto pts = criteria_of(pop);
    auto fronts = fast_nondominated_sort(std::span<const CriteriaVector>(pts));
    for (std::size_t r = 0; r < fronts.size(); ++r)
        for (auto i : fronts[r]) pop[i].rank = static_cast<int>(r);
    return fronts;
}

/// Crowding distance of each point in a single front. Per objective the
/// points are ordered by value (ties by position); the first and last get
/// +inf, interior points add (next - prev) / (max - min), and an objective
/// with max == min adds nothing.
[[nodiscard]] inline std::vector<double> crowding_distance(std::span<const CriteriaVector> front)
{
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), kInfinity);
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (auto objective : {&CriteriaVector::f1, &CriteriaVector::f2}) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a].*objective < front[b].*objective; });
        const double lo = front[order.front()].*objective;
        const double hi = front[order.back()].*objective;
        dist[order.front()] = kInfinity;
        dist[order.back()] = kInfinity;
        if (hi == lo) continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (front[order[k + 1]].*objective - front[order[k - 1]].*objective) / (hi - lo);
    }
    return dist;
}

/// Ranks and crowding distances for every member, computed front by front.
inline std::vector<Front> assign_rank_and_crowding(std::vector<Individual>& pop)
{
    auto fronts = fast_nondominated_sort(std::span<Individual>(pop));
    for (const auto& f : fronts) {
        std::vector<CriteriaVector> pts;
        pts.reserve(f.size());
        for (auto i : f) pts.push_back(pop[i].criteria);
        const auto d = crowding_distance(pts);
        for (std::size_t k = 0; k < f.size(); ++k) pop[f[k]].crowding = d[k];
    }
    return fronts;
}

/// Elitist survivor selection from parents followed by offspring: whole
/// fronts are admitted in rank order, and the first front that does not fit
/// is truncated by descending crowding distance (ties by union index).
[[nodiscard]] inline Population elite_select(const Population& parents, std::span<const Individual> offspring, std::size_t l)
{
    if (parents.members.size() + offspring.size() < l || l == 0)
        throw RangeError("elite selection needs at least l = " + std::to_string(l) + " candidates");
    std::vector<Individual> pool = parents.members;
    pool.insert(pool.end(), offspring.begin(), offspring.end());
    const auto fronts = assign_rank_and_crowding(pool);

    Population out;
    out.capacity = l;
    out.members.reserve(l);
    for (const auto& f : fronts) {
        const std::size_t room = l - out.members.size();
        if (f.size() <= room) {
            for (auto i : f) out.members.push_back(pool[i]);
        } else {
            Front sorted = f;
            std::stable_sort(sorted.begin(), sorted.end(),
                             [&](std::size_t a, std::size_t b) { return pool[a].crowding > pool[b].crowding; });
            for (std::size_t k = 0; k < room; ++k) out.members.push_back(pool[sorted[k]]);
        }
        if (out.members.size() == l) break;
    }
    return out;
}

/// Exact O(N^2) nondominated filter.
[[nodiscard]] inline std::vector<std::size_t> brute_force_pareto(std::span<const CriteriaVector> pts,
                                                                 const DominanceFn& dom = dominates)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
            dominated = j != i && dom(pts[j], pts[i]);
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

} // namespace tween

#endif
