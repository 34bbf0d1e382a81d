#ifndef TWEEN_RANDOM_HPP
#define TWEEN_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace tween {

namespace detail {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Reproducible random substream addressed by (root seed, path). The engine
/// seed is a hash chain over the path, so any two distinct paths give
/// unrelated engines and the same path always gives the same draws.
class SeededStream {
public:
    using engine_type = std::mt19937_64;

    explicit SeededStream(std::uint64_t root_seed, std::vector<std::uint64_t> path = {})
        : root_(root_seed), path_(std::move(path)), engine_(derive_seed())
    {}

    [[nodiscard]] SeededStream child(std::uint64_t index) const
    {
        auto p = path_;
        p.push_back(index);
        return SeededStream(root_, std::move(p));
    }

    [[nodiscard]] SeededStream child(std::initializer_list<std::uint64_t> indices) const
    {
        auto p = path_;
        p.insert(p.end(), indices);
        return SeededStream(root_, std::move(p));
    }

    [[nodiscard]] std::uint64_t root_seed() const noexcept { return root_; }
    [[nodiscard]] const std::vector<std::uint64_t>& path() const noexcept { return path_; }

    engine_type& engine() noexcept { return engine_; }

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mean = 0.0, double sd = 1.0) { return mean + sd * std::normal_distribution<double>(0.0, 1.0)(engine_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }

private:
    [[nodiscard]] std::uint64_t derive_seed() const noexcept
    {
        std::uint64_t h = detail::splitmix64(root_);
        for (auto v : path_) h = detail::splitmix64(h ^ detail::splitmix64(v + 0x632be59bd9b4e019ULL));
        return h;
    }

    std::uint64_t root_;
    std::vector<std::uint64_t> path_;
    engine_type engine_;
};

} // namespace tween

#endif
