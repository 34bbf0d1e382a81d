#ifndef TWEEN_ENGINE_HPP
#define TWEEN_ENGINE_HPP

#include <tween/criteria.hpp>
#include <tween/domain.hpp>
#include <tween/errors.hpp>
#include <tween/generators.hpp>
#include <tween/motion.hpp>
#include <tween/pareto.hpp>
#include <tween/random.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

namespace tween {

struct GeneratorKnobs {
    double amplitude = 0.1;      // interp: initial noise scale
    double sigma_mut = 0.05;     // both: local move scale
    double p_keep = 0.7;         // mixture: probability of keeping the parent's class
    double warp_tolerance = 0.0; // mixture: max endpoint offset

    friend bool operator==(const GeneratorKnobs&, const GeneratorKnobs&) = default;
};

struct RunConfig {
    std::size_t l = 20;
    std::size_t m = 20;
    int tau_max = 20;
    LengthPolicy length_policy{};
    std::uint64_t seed = 0;
    std::string generator_id = "mixture";
    GeneratorKnobs knobs{};
    std::string classifier_ref;
    int threads = 1;

    void validate() const
    {
        if (l < 2) throw ValidationError("population size l must be >= 2");
        if (m < 1) throw ValidationError("offspring count m must be >= 1");
        if (tau_max < 0) throw ValidationError("tau_max must be >= 0");
        if (threads < 1) throw ValidationError("threads must be >= 1");
        if (generator_id != "interp" && generator_id != "mixture")
            throw ValidationError("unknown generator '" + generator_id + "' (expected interp or mixture)");
        length_policy.validate();
    }
};

/// Aborted run, annotated with where it happened. offspring == -1 marks an
/// error outside offspring sampling.
struct EngineError : Error {
    EngineError(int generation, long offspring, const std::string& what)
        : Error("generation " + std::to_string(generation) + (offspring >= 0 ? ", offspring " + std::to_string(offspring) : "") +
                ": " + what),
          generation(generation), offspring(offspring) {}
    int generation;
    long offspring;
};

struct MemberRecord {
    CriteriaVector criteria;
    int rank = 0;
    double crowding = 0.0;

    friend bool operator==(const MemberRecord&, const MemberRecord&) = default;
};

struct GenerationSnapshot {
    int generation = 0;
    std::vector<MemberRecord> members;

    friend bool operator==(const GenerationSnapshot&, const GenerationSnapshot&) = default;
};

struct RunResult {
    RunConfig config;
    double similarity = 0.0;
    int y_len = 0;
    Population final;
    std::vector<GenerationSnapshot> history;
    double wall_time = 0.0; // seconds
};

[[nodiscard]] inline std::unique_ptr<Generator> make_generator(const RunConfig& config,
                                                             std::shared_ptr<const SyntheticDomain> domain)
{
    if (config.generator_id == "interp")
        return std::make_unique<InterpNoiseGenerator>(config.length_policy, config.knobs.amplitude, config.knobs.sigma_mut);
    if (config.generator_id == "mixture")
        return std::make_unique<PrimitiveMixtureGenerator>(std::move(domain), config.length_policy, config.knobs.sigma_mut,
                                                           config.knobs.p_keep, config.knobs.warp_tolerance);
    throw ValidationError("unknown generator '" + config.generator_id + "'");
}

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first failure
/// (lowest index) is rethrown after all workers finish.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn)
{
    std::vector<std::exception_ptr> errors(n);
    auto body = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) body(i);
            });
        pool.clear();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

enum StreamTag : std::uint64_t { kInitialTag = 0, kParentTag = 1, kOffspringTag = 2 };

[[nodiscard]] inline GenerationSnapshot snapshot(int generation, const Population& pop)
{
    GenerationSnapshot s{generation, {}};
    s.members.reserve(pop.members.size());
    for (const auto& ind : pop.members) s.members.push_back({ind.criteria, ind.rank, ind.crowding});
    return s;
}

template <class Fn>
auto with_context(int generation, long offspring, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const EngineError&) {
        throw;
    } catch (const std::exception& e) {
        throw EngineError(generation, offspring, e.what());
    }
}

/// Evaluated l initial draws, ranked and crowded but not selected.
[[nodiscard]] inline Population initial_population(const RunConfig& config, const BoundaryCondition& cond, int y_len,
                                                   const Generator& gen, const Classifier& model)
{
    const SeededStream root(config.seed);
    Population pop;
    pop.capacity = config.l;
    pop.members.resize(config.l);
    parallel_for(config.l, config.threads, [&](std::size_t n) {
        with_context(0, static_cast<long>(n), [&] {
            auto rng = root.child({kInitialTag, n});
            auto seq = gen.sample_initial(cond, y_len, rng);
            auto crit = evaluate_criteria(seq, cond, model);
            pop.members[n] = Individual{std::move(seq), crit, 0, 0.0};
        });
    });
    assign_rank_and_crowding(pop.members);
    return pop;
}

/// Parent index for each of m offspring: uniform without replacement,
/// restarting a fresh permutation whenever all l parents have been used.
[[nodiscard]] inline std::vector<std::size_t> choose_parents(std::size_t l, std::size_t m, SeededStream rng)
{
    std::vector<std::size_t> out;
    out.reserve(m);
    std::vector<std::size_t> perm(l);
    while (out.size() < m) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        for (std::size_t i = 0; i < l && out.size() < m; ++i) out.push_back(perm[i]);
    }
    return out;
}

} // namespace detail

[[nodiscard]] inline int run_transition_length(const RunConfig& config, const BoundaryCondition& cond)
{
    return estimate_transition_length(boundary_similarity(cond), config.length_policy);
}

/// l i.i.d. initial draws, evaluated. The comparison arm for guided runs.
[[nodiscard]] inline Population unguided_baseline(const RunConfig& config, const BoundaryCondition& cond, const Generator& gen,
                                                  const Classifier& model)
{
    config.validate();
    cond.validate();
    return detail::initial_population(config, cond, run_transition_length(config, cond), gen, model);
}

/// Guided sampling: initialize l samples, then for tau_max
/// generations draw m offspring conditioned on randomly chosen samples and
/// keep the best l of parents and offspring by nondominated rank and
/// crowding distance.
[[nodiscard]] inline RunResult run(const RunConfig& config, const BoundaryCondition& cond, const Generator& gen,
                                   const Classifier& model)
{
    const auto t0 = std::chrono::steady_clock::now();
    config.validate();
    cond.validate();
    if (cond.joints() != model.joints()) throw DimensionError("condition joint count does not match the classifier");

    RunResult result;
    result.config = config;
    result.similarity = boundary_similarity(cond);
    result.y_len = estimate_transition_length(result.similarity, config.length_policy);

    Population pop = detail::initial_population(config, cond, result.y_len, gen, model);
    result.history.push_back(detail::snapshot(0, pop));

    const SeededStream root(config.seed);
    for (int g = 1; g <= config.tau_max; ++g) {
        const auto parents = detail::choose_parents(pop.members.size(), config.m,
                                                    root.child({detail::kParentTag, static_cast<std::uint64_t>(g)}));
        std::vector<Individual> offspring(config.m);
        detail::parallel_for(config.m, config.threads, [&](std::size_t k) {
            detail::with_context(g, static_cast<long>(k), [&] {
                auto rng = root.child({detail::kOffspringTag, static_cast<std::uint64_t>(g), k});
                auto seq = gen.sample_conditioned(pop.members[parents[k]].seq, cond, result.y_len, rng);
                auto crit = evaluate_criteria(seq, cond, model);
                offspring[k] = Individual{std::move(seq), crit, 0, 0.0};
            });
        });
        pop = detail::with_context(g, -1, [&] { return elite_select(pop, offspring, config.l); });
        result.history.push_back(detail::snapshot(g, pop));
    }
    result.final = std::move(pop);
    result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace tween

#endif
