#ifndef TWEEN_GENERATORS_HPP
#define TWEEN_GENERATORS_HPP

#include <tween/domain.hpp>
#include <tween/errors.hpp>
#include <tween/motion.hpp>
#include <tween/random.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace tween {

/// Conditional sequence generator. sample_initial draws from G(Y | X1, X2);
/// sample_conditioned draws from G(Y | parent, X1, X2). Both return
/// sequences padded to the policy's y_max.
class Generator {
public:
    explicit Generator(LengthPolicy policy) : policy_(policy) { policy_.validate(); }
    virtual ~Generator() = default;

    [[nodiscard]] virtual MotionSequence sample_initial(const BoundaryCondition& cond, int y_len, SeededStream& rng) const = 0;
    [[nodiscard]] virtual MotionSequence sample_conditioned(const MotionSequence& parent, const BoundaryCondition& cond,
                                                            int y_len, SeededStream& rng) const = 0;

    [[nodiscard]] const LengthPolicy& policy() const noexcept { return policy_; }

protected:
    void check_length(int y_len) const
    {
        if (y_len < policy_.y_min || y_len > policy_.y_max)
            throw RangeError("y_len " + std::to_string(y_len) + " outside [" + std::to_string(policy_.y_min) + ", " +
                             std::to_string(policy_.y_max) + "]");
    }

    LengthPolicy policy_;
};

namespace detail {

[[nodiscard]] inline double frame_time(int t, int len) { return len == 1 ? 0.0 : static_cast<double>(t) / (len - 1); }

/// Shifts frames by the affine ramp that moves the first frame to `a` and
/// the last to `b`, then pins both endpoints exactly.
inline void reanchor(std::vector<Pose>& frames, const Pose& a, const Pose& b)
{
    const int len = static_cast<int>(frames.size());
    const Pose first = frames.front();
    const Pose last = frames.back();
    for (int t = 0; t < len; ++t) {
        const double u = frame_time(t, len);
        auto f = frames[t].flat();
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] += (1.0 - u) * (a.flat()[i] - first.flat()[i]) + u * (b.flat()[i] - last.flat()[i]);
    }
    if (len == 1) {
        frames.front() = a;
    } else {
        frames.front() = a;
        frames.back() = b;
    }
}

/// Adds sum_h c[h][i] * sin(h pi u) with c ~ N(0, sd^2), h = 1..harmonics.
inline void add_harmonic_noise(std::vector<Pose>& frames, int harmonics, double sd, SeededStream& rng)
{
    const int len = static_cast<int>(frames.size());
    const std::size_t width = frames.front().size();
    std::vector<double> coeff(static_cast<std::size_t>(harmonics) * width);
    for (double& c : coeff) c = rng.normal(0.0, sd);
    for (int t = 0; t < len; ++t) {
        const double u = frame_time(t, len);
        auto f = frames[t].flat();
        for (int h = 1; h <= harmonics; ++h) {
            const double s = std::sin(h * std::numbers::pi * u);
            for (std::size_t i = 0; i < width; ++i) f[i] += coeff[(h - 1) * width + i] * s;
        }
    }
}

[[nodiscard]] inline std::vector<Pose> interpolate(const Pose& a, const Pose& b, int len)
{
    std::vector<Pose> frames;
    frames.reserve(static_cast<std::size_t>(len));
    for (int t = 0; t < len; ++t) {
        const double u = frame_time(t, len);
        Pose p(a.joints());
        for (std::size_t i = 0; i < p.size(); ++i) p.flat()[i] = (1.0 - u) * a.flat()[i] + u * b.flat()[i];
        frames.push_back(std::move(p));
    }
    return frames;
}

[[nodiscard]] inline std::vector<Pose> leading_frames(const MotionSequence& parent, int y_len)
{
    if (parent.length() < static_cast<std::size_t>(y_len))
        throw RangeError("parent has " + std::to_string(parent.length()) + " frames, fewer than y_len " + std::to_string(y_len));
    return {parent.frames().begin(), parent.frames().begin() + y_len};
}

/// Random vector with norm uniform in [0, radius].
[[nodiscard]] inline Pose random_offset(int joints, double radius, SeededStream& rng)
{
    Pose dir(joints);
    double n = 0.0;
    for (double& c : dir.flat()) {
        c = rng.normal();
        n += c * c;
    }
    n = std::sqrt(n);
    const double r = rng.uniform(0.0, 1.0) * radius;
    for (double& c : dir.flat()) c = n > 0.0 ? c / n * r : 0.0;
    return dir;
}

[[nodiscard]] inline Pose add(const Pose& a, const Pose& b)
{
    Pose out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.flat()[i] += b.flat()[i];
    return out;
}

[[nodiscard]] inline Pose subtract(const Pose& a, const Pose& b)
{
    Pose out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.flat()[i] -= b.flat()[i];
    return out;
}

/// Projects v onto the ball of the given radius.
[[nodiscard]] inline Pose clamp_norm(Pose v, double radius)
{
    const double n = v.norm();
    if (n > radius) {
        const double s = n > 0.0 ? radius / n : 0.0;
        for (double& c : v.flat()) c *= s;
    }
    return v;
}

} // namespace detail

/// Straight-line interpolation between X1[-1] and X2[0] plus low-frequency
/// sinusoidal noise that vanishes at both ends.
class InterpNoiseGenerator final : public Generator {
public:
    static constexpr int kHarmonics = 3;

    InterpNoiseGenerator(LengthPolicy policy, double amplitude = 0.1, double sigma_mut = 0.05)
        : Generator(policy), amplitude_(amplitude), sigma_mut_(sigma_mut)
    {
        if (!(amplitude >= 0.0) || !(sigma_mut >= 0.0)) throw ValidationError("generator noise scales must be nonnegative");
    }

    [[nodiscard]] MotionSequence sample_initial(const BoundaryCondition& cond, int y_len, SeededStream& rng) const override
    {
        check_length(y_len);
        auto frames = detail::interpolate(cond.start(), cond.end(), y_len);
        detail::add_harmonic_noise(frames, kHarmonics, amplitude_, rng);
        detail::reanchor(frames, cond.start(), cond.end());
        return pad_to_max(MotionSequence(std::move(frames)), policy_.y_max);
    }

    [[nodiscard]] MotionSequence sample_conditioned(const MotionSequence& parent, const BoundaryCondition& cond, int y_len,
                                                    SeededStream& rng) const override
    {
        check_length(y_len);
        if (parent.joints() != cond.joints()) throw DimensionError("parent and condition disagree on joint count");
        auto frames = detail::leading_frames(parent, y_len);
        detail::add_harmonic_noise(frames, kHarmonics, sigma_mut_, rng);
        detail::reanchor(frames, cond.start(), cond.end());
        return pad_to_max(MotionSequence(std::move(frames), parent.intended_label()), policy_.y_max);
    }

    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
    [[nodiscard]] double sigma_mut() const noexcept { return sigma_mut_; }

private:
    double amplitude_;
    double sigma_mut_;
};

/// Draws a class of the synthetic domain, lays its primitive on top of the
/// boundary interpolation, and warps the endpoints to within
/// `warp_tolerance` of X1[-1] / X2[0]. Records the class as intended_label.
class PrimitiveMixtureGenerator final : public Generator {
public:
    PrimitiveMixtureGenerator(std::shared_ptr<const SyntheticDomain> domain, LengthPolicy policy, double sigma_mut = 0.05,
                              double p_keep = 0.7, double warp_tolerance = 0.0)
        : Generator(policy), domain_(std::move(domain)), sigma_mut_(sigma_mut), p_keep_(p_keep), warp_tolerance_(warp_tolerance)
    {
        if (!domain_) throw ValidationError("mixture generator needs a domain");
        if (!(sigma_mut >= 0.0)) throw ValidationError("sigma_mut must be nonnegative");
        if (!(p_keep >= 0.0 && p_keep <= 1.0)) throw ValidationError("p_keep must lie in [0,1]");
        if (!(warp_tolerance >= 0.0)) throw ValidationError("warp tolerance must be nonnegative");
    }

    [[nodiscard]] MotionSequence sample_initial(const BoundaryCondition& cond, int y_len, SeededStream& rng) const override
    {
        check_length(y_len);
        check_joints(cond);
        const int k = rng.uniform_int(0, domain_->classes - 1);
        return draw_class(k, cond, y_len, rng);
    }

    [[nodiscard]] MotionSequence sample_conditioned(const MotionSequence& parent, const BoundaryCondition& cond, int y_len,
                                                    SeededStream& rng) const override
    {
        check_length(y_len);
        check_joints(cond);
        if (parent.joints() != cond.joints()) throw DimensionError("parent and condition disagree on joint count");
        const auto parent_label = parent.intended_label();
        if (!parent_label || *parent_label < 0 || *parent_label >= domain_->classes)
            throw MissingLabelError("mixture generator parent carries no valid class label");

        if (!rng.bernoulli(p_keep_)) {
            int k = rng.uniform_int(0, domain_->classes - 2);
            if (k >= *parent_label) ++k;
            return draw_class(k, cond, y_len, rng);
        }

        auto frames = detail::leading_frames(parent, y_len);
        const auto base = detail::interpolate(frames.front(), frames.back(), y_len);
        // Rescale the parent's own displacement and add smooth noise.
        const double scale = rng.normal(0.0, sigma_mut_);
        for (int t = 0; t < y_len; ++t)
            for (std::size_t i = 0; i < frames[t].size(); ++i)
                frames[t].flat()[i] += scale * (frames[t].flat()[i] - base[t].flat()[i]);
        detail::add_harmonic_noise(frames, InterpNoiseGenerator::kHarmonics, sigma_mut_, rng);

        Pose start = cond.start();
        Pose end = cond.end();
        if (warp_tolerance_ > 0.0) {
            auto step = [&](const Pose& current, const Pose& target) {
                Pose off = detail::subtract(current, target);
                for (double& c : off.flat()) c += rng.normal(0.0, sigma_mut_);
                return detail::add(target, detail::clamp_norm(std::move(off), warp_tolerance_));
            };
            start = step(parent.front(), cond.start());
            end = step(parent[static_cast<std::size_t>(y_len - 1)], cond.end());
        }
        detail::reanchor(frames, start, end);
        return pad_to_max(MotionSequence(std::move(frames), *parent_label), policy_.y_max);
    }

    [[nodiscard]] const SyntheticDomain& domain() const noexcept { return *domain_; }
    [[nodiscard]] double sigma_mut() const noexcept { return sigma_mut_; }
    [[nodiscard]] double p_keep() const noexcept { return p_keep_; }
    [[nodiscard]] double warp_tolerance() const noexcept { return warp_tolerance_; }

private:
    void check_joints(const BoundaryCondition& cond) const
    {
        if (cond.joints() != domain_->joints) throw DimensionError("condition joint count does not match the domain");
    }

    [[nodiscard]] MotionSequence draw_class(int k, const BoundaryCondition& cond, int y_len, SeededStream& rng) const
    {
        const auto params = domain_->draw_params(rng);
        auto frames = detail::interpolate(cond.start(), cond.end(), y_len);
        for (int t = 0; t < y_len; ++t) {
            const Pose d = domain_->displacement(k, detail::frame_time(t, y_len), params);
            for (std::size_t i = 0; i < frames[t].size(); ++i) frames[t].flat()[i] += d.flat()[i];
        }
        Pose start = cond.start();
        Pose end = cond.end();
        if (warp_tolerance_ > 0.0) {
            start = detail::add(start, detail::random_offset(domain_->joints, warp_tolerance_, rng));
            end = detail::add(end, detail::random_offset(domain_->joints, warp_tolerance_, rng));
        }
        detail::reanchor(frames, start, end);
        return pad_to_max(MotionSequence(std::move(frames), k), policy_.y_max);
    }

    std::shared_ptr<const SyntheticDomain> domain_;
    double sigma_mut_;
    double p_keep_;
    double warp_tolerance_;
};

} // namespace tween

#endif
