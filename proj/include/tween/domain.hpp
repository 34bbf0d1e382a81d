#ifndef TWEEN_DOMAIN_HPP
#define TWEEN_DOMAIN_HPP

#include <tween/criteria.hpp>
#include <tween/errors.hpp>
#include <tween/io.hpp>
#include <tween/motion.hpp>
#include <tween/random.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace tween {

enum class Waveform : int { sine = 0, triangle = 1, soft_square = 2 };

[[nodiscard]] inline double waveform_value(Waveform w, double angle)
{
    switch (w) {
    case Waveform::sine: return std::sin(angle);
    case Waveform::triangle: return 2.0 / std::numbers::pi * std::asin(std::sin(angle));
    case Waveform::soft_square: return std::tanh(3.0 * std::sin(angle)) / std::tanh(3.0);
    }
    return 0.0;
}

/// One parameterized motion primitive.
struct ClassSpec {
    double frequency = 1.0;          // cycles over the transition
    double phase = 0.0;              // radians
    std::vector<double> amplitude;   // 3J, normalized units
    std::vector<Waveform> waveform;  // J
};

/// Random instance parameters of a primitive; (1, 0, 1) is the template.
struct PrimitiveParams {
    double frequency_scale = 1.0;
    double phase_shift = 0.0;
    double amplitude_scale = 1.0;
};

struct SyntheticDomain {
    int classes = 0;
    int joints = 0;
    std::uint64_t seed = 0;
    double margin = 0.0;
    double frequency_jitter = 0.05;
    double phase_jitter = 0.2;
    double amplitude_jitter = 0.1;
    Pose rest_pose;
    std::vector<ClassSpec> class_specs;

    /// Displacement of class k at normalized time u in [0,1]. Vanishes at
    /// both ends through a sin(pi u) window.
    [[nodiscard]] Pose displacement(int k, double u, const PrimitiveParams& p) const
    {
        const auto& spec = class_specs.at(static_cast<std::size_t>(k));
        const double window = std::sin(std::numbers::pi * u);
        const double angle = 2.0 * std::numbers::pi * spec.frequency * p.frequency_scale * u + spec.phase + p.phase_shift;
        Pose d(joints);
        for (int j = 0; j < joints; ++j) {
            const double w = waveform_value(spec.waveform[static_cast<std::size_t>(j)], angle) * window * p.amplitude_scale;
            for (int a = 0; a < 3; ++a) d.at(j, a) = spec.amplitude[static_cast<std::size_t>(j) * 3 + a] * w;
        }
        return d;
    }

    [[nodiscard]] PrimitiveParams draw_params(SeededStream& rng) const
    {
        PrimitiveParams p;
        p.frequency_scale = 1.0 + rng.uniform(-frequency_jitter, frequency_jitter);
        p.phase_shift = rng.uniform(-phase_jitter, phase_jitter);
        p.amplitude_scale = 1.0 + rng.uniform(-amplitude_jitter, amplitude_jitter);
        return p;
    }

    /// rest_pose + displacement sampled at `frames` evenly spaced times.
    [[nodiscard]] MotionSequence primitive(int k, int frames, const PrimitiveParams& p = {}) const
    {
        std::vector<Pose> out;
        out.reserve(static_cast<std::size_t>(frames));
        for (int t = 0; t < frames; ++t) {
            const double u = frames == 1 ? 0.0 : static_cast<double>(t) / (frames - 1);
            Pose pose = rest_pose;
            const Pose d = displacement(k, u, p);
            for (std::size_t i = 0; i < pose.size(); ++i) pose.flat()[i] += d.flat()[i];
            out.push_back(std::move(pose));
        }
        return MotionSequence(std::move(out), k);
    }

    [[nodiscard]] std::vector<MotionSequence> centroids(int frames = NearestCentroidClassifier::kDefaultFrames) const
    {
        std::vector<MotionSequence> out;
        for (int k = 0; k < classes; ++k) out.push_back(primitive(k, frames));
        return out;
    }

    [[nodiscard]] NearestCentroidClassifier classifier(double temperature = NearestCentroidClassifier::kDefaultTemperature) const
    {
        return NearestCentroidClassifier(joints, centroids(), NearestCentroidClassifier::kDefaultFrames, temperature);
    }
};

/// Chain skeleton with the root at the origin and unit root-to-head length.
[[nodiscard]] inline Pose make_rest_pose(int joints)
{
    Pose p(joints);
    for (int j = 0; j < joints; ++j) {
        const double h = joints == 1 ? 0.0 : static_cast<double>(j) / (joints - 1);
        p.at(j, 0) = 0.2 * std::sin(1.3 * j);
        p.at(j, 1) = h;
        p.at(j, 2) = 0.2 * (std::cos(1.3 * j) - 1.0);
    }
    const double head = [&] {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) s += p.at(joints - 1, a) * p.at(joints - 1, a);
        return std::sqrt(s);
    }();
    for (double& c : p.flat()) c /= head;
    return p;
}

/// RMS per-joint distance between the displacement profiles of two motions.
[[nodiscard]] inline double profile_distance(const MotionSequence& a, const MotionSequence& b, int frames)
{
    const auto pa = displacement_profile(a, frames);
    const auto pb = displacement_profile(b, frames);
    double acc = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) acc += (pa[i] - pb[i]) * (pa[i] - pb[i]);
    return std::sqrt(acc) / std::sqrt(static_cast<double>(frames) * a.joints());
}

inline constexpr double kDefaultSeparationMargin = 0.05;

/// D well-separated primitive classes, reproducible from the seed.
[[nodiscard]] inline SyntheticDomain make_synthetic_domain(int classes, int joints, std::uint64_t seed,
                                                           double margin = kDefaultSeparationMargin,
                                                           int max_attempts = 1000)
{
    if (classes < 2) throw ValidationError("synthetic domain needs D >= 2 (got " + std::to_string(classes) + ")");
    if (joints < 2) throw ValidationError("synthetic domain needs J >= 2 (got " + std::to_string(joints) + ")");
    SyntheticDomain dom;
    dom.classes = 0;
    dom.joints = joints;
    dom.seed = seed;
    dom.margin = margin;
    dom.rest_pose = make_rest_pose(joints);

    SeededStream rng(seed, {0xd0});
    const int frames = NearestCentroidClassifier::kDefaultFrames;
    std::vector<MotionSequence> accepted;
    for (int k = 0; k < classes; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
            ClassSpec spec;
            spec.frequency = rng.uniform(0.5, 2.0);
            spec.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            spec.amplitude.resize(static_cast<std::size_t>(joints) * 3);
            for (double& a : spec.amplitude) a = rng.uniform(0.05, 0.25) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
            spec.waveform.resize(static_cast<std::size_t>(joints));
            for (auto& w : spec.waveform) w = static_cast<Waveform>(rng.uniform_int(0, 2));

            dom.class_specs.push_back(spec);
            dom.classes = k + 1;
            const auto candidate = dom.primitive(k, frames);
            bool ok = true;
            for (const auto& c : accepted)
                if (profile_distance(candidate, c, frames) <= margin) { ok = false; break; }
            if (ok) {
                accepted.push_back(candidate);
                placed = true;
            } else {
                dom.class_specs.pop_back();
                dom.classes = k;
            }
        }
        if (!placed)
            throw DomainGenerationError("could not place class " + std::to_string(k) + " with separation margin " + format_double(margin));
    }
    return dom;
}

/// Classifier whose centroids are re-estimated as the mean of `samples`
/// independently drawn instances per class.
[[nodiscard]] inline NearestCentroidClassifier make_heldout_classifier(const SyntheticDomain& dom, std::uint64_t seed,
                                                                       int samples = 32)
{
    SeededStream root(seed, {0xe1});
    const int frames = NearestCentroidClassifier::kDefaultFrames;
    std::vector<MotionSequence> centroids;
    for (int k = 0; k < dom.classes; ++k) {
        std::vector<Pose> mean(static_cast<std::size_t>(frames), Pose(dom.joints));
        auto rng = root.child(static_cast<std::uint64_t>(k));
        for (int s = 0; s < samples; ++s) {
            const auto inst = dom.primitive(k, frames, dom.draw_params(rng));
            for (int t = 0; t < frames; ++t)
                for (std::size_t i = 0; i < mean[t].size(); ++i) mean[t].flat()[i] += inst[t].flat()[i] / samples;
        }
        centroids.emplace_back(std::move(mean), k);
    }
    return NearestCentroidClassifier(dom.joints, std::move(centroids));
}

[[nodiscard]] inline Pose rotate_yaw(const Pose& p, double angle)
{
    Pose out = p;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (int j = 0; j < p.joints(); ++j) {
        out.at(j, 0) = c * p.at(j, 0) + s * p.at(j, 2);
        out.at(j, 2) = -s * p.at(j, 0) + c * p.at(j, 2);
    }
    return out;
}

/// Keyframe sequences X1, X2 built from yaw-rotated rest poses with a small
/// per-joint offset and a slow turn across the keyframes.
[[nodiscard]] inline BoundaryCondition make_condition(const SyntheticDomain& dom, int keyframes, SeededStream rng)
{
    if (keyframes < 1) throw ValidationError("condition needs at least one keyframe");
    auto side = [&](double heading, double turn) {
        Pose offset(dom.joints);
        for (int j = 1; j < dom.joints; ++j)
            for (int a = 0; a < 3; ++a) offset.at(j, a) = rng.normal(0.0, 0.02);
        std::vector<Pose> frames;
        for (int t = 0; t < keyframes; ++t) {
            Pose p = rotate_yaw(dom.rest_pose, heading + turn * t);
            for (std::size_t i = 0; i < p.size(); ++i) p.flat()[i] += offset.flat()[i];
            frames.push_back(std::move(p));
        }
        return MotionSequence(std::move(frames));
    };
    const double h1 = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double h2 = h1 + rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
    auto x1 = side(h1 - 0.05 * (keyframes - 1), 0.05);
    auto x2 = side(h2, 0.05);
    return BoundaryCondition{std::move(x1), std::move(x2)};
}

// -- domain file

[[nodiscard]] inline json domain_to_json(const SyntheticDomain& dom)
{
    json classes = json::array();
    for (const auto& s : dom.class_specs) {
        std::vector<int> wf;
        for (auto w : s.waveform) wf.push_back(static_cast<int>(w));
        classes.push_back({{"frequency", s.frequency}, {"phase", s.phase}, {"amplitude", s.amplitude}, {"waveform", wf}});
    }
    std::vector<double> rest(dom.rest_pose.flat().begin(), dom.rest_pose.flat().end());
    return json{{"D", dom.classes},
                {"J", dom.joints},
                {"seed", dom.seed},
                {"margin", dom.margin},
                {"frequency_jitter", dom.frequency_jitter},
                {"phase_jitter", dom.phase_jitter},
                {"amplitude_jitter", dom.amplitude_jitter},
                {"rest_pose", rest},
                {"classes", std::move(classes)}};
}

[[nodiscard]] inline SyntheticDomain domain_from_json(const json& doc, const std::string& source = "<domain>")
{
    try {
        SyntheticDomain dom;
        dom.classes = doc.at("D").get<int>();
        dom.joints = doc.at("J").get<int>();
        dom.seed = doc.at("seed").get<std::uint64_t>();
        dom.margin = doc.at("margin").get<double>();
        dom.frequency_jitter = doc.at("frequency_jitter").get<double>();
        dom.phase_jitter = doc.at("phase_jitter").get<double>();
        dom.amplitude_jitter = doc.at("amplitude_jitter").get<double>();
        dom.rest_pose = Pose(doc.at("rest_pose").get<std::vector<double>>());
        for (const auto& c : doc.at("classes")) {
            ClassSpec s;
            s.frequency = c.at("frequency").get<double>();
            s.phase = c.at("phase").get<double>();
            s.amplitude = c.at("amplitude").get<std::vector<double>>();
            for (int w : c.at("waveform").get<std::vector<int>>()) {
                if (w < 0 || w > 2) throw ParseError(source, 0, "unknown waveform id " + std::to_string(w));
                s.waveform.push_back(static_cast<Waveform>(w));
            }
            if (s.amplitude.size() != static_cast<std::size_t>(dom.joints) * 3 || s.waveform.size() != static_cast<std::size_t>(dom.joints))
                throw ParseError(source, 0, "class spec size does not match J");
            dom.class_specs.push_back(std::move(s));
        }
        if (dom.classes < 2 || dom.class_specs.size() != static_cast<std::size_t>(dom.classes))
            throw ParseError(source, 0, "class count does not match D");
        if (dom.rest_pose.joints() != dom.joints) throw ParseError(source, 0, "rest pose does not match J");
        return dom;
    } catch (const json::exception& e) {
        throw ParseError(source, 0, e.what());
    }
}

[[nodiscard]] inline SyntheticDomain load_domain(const std::filesystem::path& path)
{
    return domain_from_json(read_json_file(path), path.string());
}

} // namespace tween

#endif
