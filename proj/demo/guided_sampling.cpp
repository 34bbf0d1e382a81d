// Guided vs. unguided sampling on a small synthetic domain.
//
//   ./guided_sampling [seed]

#include <tween/domain.hpp>
#include <tween/engine.hpp>
#include <tween/metrics.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>

int main(int argc, char** argv)
{
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

    auto domain = std::make_shared<const tween::SyntheticDomain>(tween::make_synthetic_domain(6, 16, seed));
    const auto classifier = domain->classifier();
    const auto cond = tween::make_condition(*domain, 5, tween::SeededStream(seed, {0xc0}));

    tween::RunConfig cfg;
    cfg.seed = seed;
    const auto gen = tween::make_generator(cfg, domain);

    const auto guided = tween::run(cfg, cond, *gen, classifier);
    const auto unguided = tween::unguided_baseline(cfg, cond, *gen, classifier);

    auto seqs = [](const tween::Population& p) {
        std::vector<tween::MotionSequence> out;
        for (const auto& m : p.members) out.push_back(m.seq);
        return out;
    };
    const auto g = seqs(guided.final);
    const auto u = seqs(unguided);

    std::cout << "transition length " << guided.y_len << " (similarity " << guided.similarity << ")\n";
    std::cout << "guided:   APD " << tween::apd(g) << ", classes " << tween::class_coverage(g, classifier) << "\n";
    std::cout << "unguided: APD " << tween::apd(u) << ", classes " << tween::class_coverage(u, classifier) << "\n";
    std::cout << "final population (f1, f2, label, confidence):\n";
    for (const auto& m : guided.final.members)
        std::cout << "  " << m.criteria.f1 << ", " << m.criteria.f2 << ", " << m.criteria.label << ", " << m.criteria.confidence
                  << (m.rank == 0 ? "  *" : "") << "\n";
}
