#include <tween/pareto.hpp>

#include <tween/random.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace tween;

namespace {

CriteriaVector cv(double f1, double f2) { return CriteriaVector{f1, f2, 0, 0, 0, 0, 0}; }

std::vector<CriteriaVector> pts(std::initializer_list<std::pair<double, double>> xs)
{
    std::vector<CriteriaVector> out;
    for (auto [a, b] : xs) out.push_back(cv(a, b));
    return out;
}

// Front decomposition by repeated O(N^2) peeling with a locally written
// dominance test.
std::vector<Front> peel_oracle(const std::vector<CriteriaVector>& p)
{
    auto dom = [](const CriteriaVector& a, const CriteriaVector& b) {
        return (a.f1 <= b.f1 && a.f2 <= b.f2) && (a.f1 != b.f1 || a.f2 != b.f2);
    };
    std::vector<bool> used(p.size(), false);
    std::vector<Front> fronts;
    std::size_t left = p.size();
    while (left > 0) {
        Front f;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (used[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < p.size() && !dominated; ++j)
                dominated = !used[j] && j != i && dom(p[j], p[i]);
            if (!dominated) f.push_back(i);
        }
        for (auto i : f) used[i] = true;
        left -= f.size();
        fronts.push_back(f);
    }
    return fronts;
}

std::vector<CriteriaVector> random_points(SeededStream& rng, std::size_t n, bool discrete)
{
    std::vector<CriteriaVector> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(discrete ? cv(rng.uniform_int(0, 6), rng.uniform_int(0, 6)) : cv(rng.uniform(), rng.uniform()));
    return out;
}

Individual ind(double f1, double f2)
{
    return Individual{MotionSequence(std::vector<Pose>{Pose(1)}), cv(f1, f2), 0, 0.0};
}

} // namespace

TEST(Dominates, WorkedCases)
{
    EXPECT_TRUE(dominates(cv(0.1, 0.2), cv(0.2, 0.3)));
    EXPECT_FALSE(dominates(cv(0.1, 0.4), cv(0.2, 0.3)));
    EXPECT_FALSE(dominates(cv(0.2, 0.3), cv(0.1, 0.4)));
    EXPECT_FALSE(dominates(cv(0.1, 0.2), cv(0.1, 0.2)));
    EXPECT_TRUE(dominates(cv(0.1, 0.2), cv(0.1, 0.3)));
    EXPECT_THROW((void)dominates(cv(std::nan(""), 0), cv(0, 0)), InvalidCriteriaError);
    EXPECT_THROW((void)dominates(cv(0, 0), cv(0, std::nan(""))), InvalidCriteriaError);
}

TEST(Dominates, StrictPartialOrder)
{
    SeededStream rng(17);
    for (int i = 0; i < 10000; ++i) {
        const bool discrete = i % 2 == 0;
        const auto p = random_points(rng, 3, discrete);
        const auto &a = p[0], &b = p[1], &c = p[2];
        EXPECT_FALSE(dominates(a, a));
        EXPECT_FALSE(dominates(a, b) && dominates(b, a));
        if (dominates(a, b) && dominates(b, c)) EXPECT_TRUE(dominates(a, c));
    }
}

TEST(FastNondominatedSort, WorkedExample)
{
    const auto p = pts({{1, 4}, {2, 3}, {3, 2}, {2.5, 3.5}});
    const auto fronts = fast_nondominated_sort(std::span<const CriteriaVector>(p));
    ASSERT_EQ(fronts.size(), 2u);
    EXPECT_EQ(fronts[0], (Front{0, 1, 2}));
    EXPECT_EQ(fronts[1], (Front{3}));
    EXPECT_EQ(fronts, peel_oracle(p));
}

TEST(FastNondominatedSort, DegenerateInputs)
{
    const auto same = pts({{1, 1}, {1, 1}, {1, 1}});
    EXPECT_EQ(fast_nondominated_sort(std::span<const CriteriaVector>(same)), (std::vector<Front>{{0, 1, 2}}));
    const auto chain = pts({{2, 2}, {3, 3}, {1, 1}});
    EXPECT_EQ(fast_nondominated_sort(std::span<const CriteriaVector>(chain)), (std::vector<Front>{{2}, {0}, {1}}));
    EXPECT_THROW((void)fast_nondominated_sort(std::span<const CriteriaVector>()), EmptyPopulationError);
}

TEST(FastNondominatedSort, AgreesWithPeelingOracle)
{
    SeededStream rng(23);
    for (std::size_t n : {1, 2, 10, 50, 200})
        for (int rep = 0; rep < 20; ++rep) {
            const auto p = random_points(rng, n, rep % 2 == 0);
            EXPECT_EQ(fast_nondominated_sort(std::span<const CriteriaVector>(p)), peel_oracle(p));
        }
}

TEST(FastNondominatedSort, WritesRanks)
{
    std::vector<Individual> pop{ind(1, 1), ind(2, 2), ind(0.5, 3)};
    (void)fast_nondominated_sort(std::span<Individual>(pop));
    EXPECT_EQ(pop[0].rank, 0);
    EXPECT_EQ(pop[1].rank, 1);
    EXPECT_EQ(pop[2].rank, 0);
}

TEST(CrowdingDistance, WorkedFront)
{
    const auto d = crowding_distance(pts({{1, 4}, {2, 3}, {3, 2}}));
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d[0], kInfinity);
    EXPECT_EQ(d[1], 2.0);
    EXPECT_EQ(d[2], kInfinity);
}

TEST(CrowdingDistance, DegenerateFronts)
{
    EXPECT_EQ(crowding_distance(pts({{0.3, 0.7}})), std::vector<double>{kInfinity});
    EXPECT_EQ(crowding_distance(pts({{0.3, 0.7}, {0.4, 0.6}})), (std::vector<double>{kInfinity, kInfinity}));
    EXPECT_EQ(crowding_distance(pts({{1, 1}, {1, 1}, {1, 1}, {1, 1}})),
              (std::vector<double>{kInfinity, 0.0, 0.0, kInfinity}));
    // f2 constant: only f1 contributes.
    const auto d = crowding_distance(pts({{0, 5}, {1, 5}, {4, 5}}));
    EXPECT_EQ(d[1], 1.0);
}

TEST(EliteSelect, ExactFitKeepsFrontZero)
{
    Population parents{{ind(1, 4), ind(3, 3)}, 2};
    const std::vector<Individual> offspring{ind(2, 2), ind(5, 5)};
    const auto sel = elite_select(parents, offspring, 2);
    ASSERT_EQ(sel.size(), 2u);
    EXPECT_EQ(sel.members[0].criteria, cv(1, 4));
    EXPECT_EQ(sel.members[1].criteria, cv(2, 2));
    EXPECT_EQ(sel.capacity, 2u);
}

TEST(EliteSelect, ChainKeepsLowestRanks)
{
    Population parents{{ind(4, 4), ind(2, 2)}, 2};
    const std::vector<Individual> offspring{ind(3, 3), ind(1, 1)};
    const auto sel = elite_select(parents, offspring, 2);
    EXPECT_EQ(sel.members[0].criteria, cv(1, 1));
    EXPECT_EQ(sel.members[1].criteria, cv(2, 2));
    EXPECT_EQ(sel.members[0].rank, 0);
    EXPECT_EQ(sel.members[1].rank, 1);
}

TEST(EliteSelect, TruncatesByCrowding)
{
    Population parents{{ind(1, 4), ind(2, 3)}, 2};
    const std::vector<Individual> offspring{ind(3, 2)};
    const auto sel = elite_select(parents, offspring, 2);
    ASSERT_EQ(sel.size(), 2u);
    std::set<std::pair<double, double>> got;
    for (const auto& m : sel.members) got.insert({m.criteria.f1, m.criteria.f2});
    EXPECT_EQ(got, (std::set<std::pair<double, double>>{{1, 4}, {3, 2}}));
    EXPECT_THROW((void)elite_select(parents, {}, 3), RangeError);
}

TEST(EliteSelect, NeverKeepsDominatedOverNondominated)
{
    SeededStream rng(31);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t l = 2 + rep % 20;
        Population parents;
        parents.capacity = l;
        std::vector<Individual> offspring;
        for (std::size_t i = 0; i < l; ++i) parents.members.push_back(ind(rng.uniform(), rng.uniform()));
        for (std::size_t i = 0; i < l; ++i) offspring.push_back(ind(rng.uniform_int(0, 5) / 5.0, rng.uniform()));
        std::vector<CriteriaVector> uni;
        for (const auto& m : parents.members) uni.push_back(m.criteria);
        for (const auto& m : offspring) uni.push_back(m.criteria);
        const auto oracle = peel_oracle(uni);

        const auto sel = elite_select(parents, offspring, l);
        ASSERT_EQ(sel.size(), l);
        const int worst_rank = std::max_element(sel.members.begin(), sel.members.end(),
                                                [](auto& a, auto& b) { return a.rank < b.rank; })->rank;
        // Every front strictly better than the worst admitted one is fully kept.
        std::size_t expected_full = 0;
        for (int r = 0; r < worst_rank; ++r) expected_full += oracle[r].size();
        std::size_t kept_better = 0;
        for (const auto& m : sel.members) kept_better += m.rank < worst_rank ? 1 : 0;
        EXPECT_EQ(kept_better, expected_full);
        if (oracle[0].size() >= l) EXPECT_EQ(worst_rank, 0);
        // Deterministic.
        EXPECT_EQ(elite_select(parents, offspring, l), sel);
    }
}

TEST(BruteForcePareto, Cases)
{
    const auto chain = pts({{1, 1}, {2, 2}});
    EXPECT_EQ(brute_force_pareto(chain), (std::vector<std::size_t>{0}));
    const auto anti = pts({{1, 4}, {2, 3}, {3, 2}});
    EXPECT_EQ(brute_force_pareto(anti), (std::vector<std::size_t>{0, 1, 2}));
    SeededStream rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto p = random_points(rng, 200, rep % 2 == 1);
        EXPECT_EQ(brute_force_pareto(p), fast_nondominated_sort(std::span<const CriteriaVector>(p)).front());
    }
}
