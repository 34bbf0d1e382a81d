#ifndef TWEEN_CRITERIA_HPP
#define TWEEN_CRITERIA_HPP

#include <tween/errors.hpp>
#include <tween/io.hpp>
#include <tween/motion.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace tween {

struct ClassifierOutput {
    int label = 0;
    double confidence = 0.0;
    std::vector<double> distribution;
};

/// Motion classifier contract used by the diversity component.
class Classifier {
public:
    virtual ~Classifier() = default;
    [[nodiscard]] virtual ClassifierOutput classify(const MotionSequence& seq) const = 0;
    [[nodiscard]] virtual int classes() const noexcept = 0;
    [[nodiscard]] virtual int joints() const noexcept = 0;
};

/// Strips trailing padding, linearly resamples to `frames` frames, then
/// subtracts the straight line between the first and last resampled frames.
/// The result is the motion's displacement profile, independent of where its
/// endpoints sit.
[[nodiscard]] inline std::vector<double> displacement_profile(const MotionSequence& seq, int frames)
{
    const std::size_t n = unpadded_length(seq);
    const std::size_t width = seq.front().size();
    std::vector<double> out(static_cast<std::size_t>(frames) * width);
    for (int k = 0; k < frames; ++k) {
        const double pos = frames == 1 ? 0.0 : static_cast<double>(k) * static_cast<double>(n - 1) / (frames - 1);
        const std::size_t lo = std::min(static_cast<std::size_t>(pos), n - 1);
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double w = pos - static_cast<double>(lo);
        auto a = seq[lo].flat();
        auto b = seq[hi].flat();
        for (std::size_t i = 0; i < width; ++i)
            out[k * width + i] = (1.0 - w) * a[i] + w * b[i];
    }
    if (frames > 1) {
        const std::size_t last = static_cast<std::size_t>(frames - 1) * width;
        std::vector<double> first(out.begin(), out.begin() + width);
        std::vector<double> final(out.begin() + last, out.end());
        for (int k = 0; k < frames; ++k) {
            const double u = static_cast<double>(k) / (frames - 1);
            for (std::size_t i = 0; i < width; ++i)
                out[k * width + i] -= (1.0 - u) * first[i] + u * final[i];
        }
    } else {
        std::fill(out.begin(), out.end(), 0.0);
    }
    return out;
}

/// Nearest-centroid classifier over displacement profiles with
/// distribution = softmax(-d_k / temperature), where d_k is the RMS per-joint
/// distance to centroid k. Ties go to the lowest class index.
class NearestCentroidClassifier final : public Classifier {
public:
    static constexpr int kDefaultFrames = 15;
    static constexpr double kDefaultTemperature = 0.25;

    NearestCentroidClassifier(int joints, std::vector<MotionSequence> centroids,
                              int frames = kDefaultFrames, double temperature = kDefaultTemperature)
        : joints_(joints), frames_(frames), temperature_(temperature)
    {
        if (centroids.size() < 2) throw ValidationError("classifier needs at least 2 classes");
        if (frames < 2) throw ValidationError("classifier needs at least 2 resampling frames");
        if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ValidationError("classifier temperature must be positive");
        for (const auto& c : centroids) {
            if (c.joints() != joints) throw DimensionError("centroid joint count does not match classifier");
            raw_.push_back(c);
            profiles_.push_back(displacement_profile(c, frames_));
        }
    }

    [[nodiscard]] int classes() const noexcept override { return static_cast<int>(profiles_.size()); }
    [[nodiscard]] int joints() const noexcept override { return joints_; }
    [[nodiscard]] int frames() const noexcept { return frames_; }
    [[nodiscard]] double temperature() const noexcept { return temperature_; }
    [[nodiscard]] const std::vector<MotionSequence>& centroids() const noexcept { return raw_; }

    [[nodiscard]] std::vector<double> distances(const MotionSequence& seq) const
    {
        if (seq.joints() != joints_)
            throw DimensionError("sequence has " + std::to_string(seq.joints()) + " joints, classifier expects " + std::to_string(joints_));
        const auto profile = displacement_profile(seq, frames_);
        const double norm = std::sqrt(static_cast<double>(frames_) * joints_);
        std::vector<double> d;
        d.reserve(profiles_.size());
        for (const auto& c : profiles_) {
            double acc = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double diff = profile[i] - c[i];
                acc += diff * diff;
            }
            d.push_back(std::sqrt(acc) / norm);
        }
        return d;
    }

    [[nodiscard]] ClassifierOutput classify(const MotionSequence& seq) const override
    {
        const auto d = distances(seq);
        const double dmin = *std::min_element(d.begin(), d.end());
        ClassifierOutput out;
        out.distribution.resize(d.size());
        double total = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) {
            out.distribution[k] = std::exp(-(d[k] - dmin) / temperature_);
            total += out.distribution[k];
        }
        for (double& p : out.distribution) p /= total;
        const auto best = std::max_element(out.distribution.begin(), out.distribution.end());
        out.label = static_cast<int>(best - out.distribution.begin());
        out.confidence = *best;
        return out;
    }

private:
    int joints_;
    int frames_;
    double temperature_;
    std::vector<MotionSequence> raw_;
    std::vector<std::vector<double>> profiles_;
};

// -- classifier model file: {"D", "J", "frames", "temperature", "centroids": [flat arrays]}

[[nodiscard]] inline json classifier_to_json(const NearestCentroidClassifier& model)
{
    json centroids = json::array();
    for (const auto& c : model.centroids()) {
        // Stored at the model's resampling resolution.
        if (c.length() != static_cast<std::size_t>(model.frames()))
            throw ValidationError("centroid length must equal the classifier frame count to serialize");
        centroids.push_back(c.flatten());
    }
    return json{{"D", model.classes()}, {"J", model.joints()}, {"frames", model.frames()},
                {"temperature", model.temperature()}, {"centroids", std::move(centroids)}};
}

[[nodiscard]] inline NearestCentroidClassifier classifier_from_json(const json& doc, const std::string& source = "<classifier>")
{
    auto fail = [&](const std::string& what) { return ParseError(source, 0, what); };
    for (const char* key : {"D", "J", "frames"})
        if (!doc.contains(key) || !doc[key].is_number_integer()) throw fail(std::string("missing integer field \"") + key + "\"");
    if (!doc.contains("temperature") || !doc["temperature"].is_number()) throw fail("missing number field \"temperature\"");
    if (!doc.contains("centroids") || !doc["centroids"].is_array()) throw fail("missing array field \"centroids\"");
    const int d = doc["D"].get<int>();
    const int j = doc["J"].get<int>();
    const int frames = doc["frames"].get<int>();
    if (j < 1 || frames < 2) throw fail("invalid J or frames");
    if (doc["centroids"].size() != static_cast<std::size_t>(d)) throw fail("centroid count does not match D");
    const std::size_t width = static_cast<std::size_t>(j) * 3;
    std::vector<MotionSequence> centroids;
    for (const auto& c : doc["centroids"]) {
        if (!c.is_array() || c.size() != width * frames) throw fail("centroid has wrong length");
        const auto flat = c.get<std::vector<double>>();
        std::vector<Pose> poses;
        for (int t = 0; t < frames; ++t)
            poses.emplace_back(std::vector<double>(flat.begin() + t * width, flat.begin() + (t + 1) * width));
        centroids.emplace_back(std::move(poses));
    }
    return NearestCentroidClassifier(j, std::move(centroids), frames, doc["temperature"].get<double>());
}

[[nodiscard]] inline NearestCentroidClassifier load_classifier(const std::filesystem::path& path)
{
    return classifier_from_json(read_json_file(path), path.string());
}

// -- criteria

/// Evaluated objectives with every component cached.
struct CriteriaVector {
    double f1 = 0.0;
    double f2 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta = 0.0;
    int label = 0;
    double confidence = 0.0;

    friend bool operator==(const CriteriaVector&, const CriteriaVector&) = default;
};

struct DiversityComponents {
    double alpha1;
    double alpha2;
};

/// alpha1 = (C(Y) + P_c(Y)) / D, alpha2 = 1 - alpha1.
[[nodiscard]] inline DiversityComponents diversity_components(const ClassifierOutput& out, int classes)
{
    if (classes < 2) throw ValidationError("diversity components need D >= 2");
    if (out.label < 0 || out.label >= classes) throw RangeError("classifier label outside {0..D-1}");
    if (!(out.confidence >= 0.0 && out.confidence <= 1.0)) throw RangeError("classifier confidence outside [0,1]");
    const double a1 = (static_cast<double>(out.label) + out.confidence) / classes;
    return {a1, 1.0 - a1};
}

/// beta = |X1[-1] - Y[0]| + |Y[-1] - X2[0]| with Euclidean norms over the
/// flattened pose.
[[nodiscard]] inline double smoothness(const MotionSequence& seq, const BoundaryCondition& cond)
{
    if (seq.joints() != cond.x1.joints() || seq.joints() != cond.x2.joints())
        throw DimensionError("sequence and boundary condition disagree on joint count");
    return distance(cond.start(), seq.front()) + distance(seq.back(), cond.end());
}

[[nodiscard]] inline CriteriaVector make_criteria(const ClassifierOutput& out, int classes, double beta)
{
    const auto [a1, a2] = diversity_components(out, classes);
    return CriteriaVector{a1 + beta, a2 + beta, a1, a2, beta, out.label, out.confidence};
}

[[nodiscard]] inline CriteriaVector evaluate_criteria(const MotionSequence& seq, const BoundaryCondition& cond,
                                                      const Classifier& model)
{
    const double beta = smoothness(seq, cond);
    return make_criteria(model.classify(seq), model.classes(), beta);
}

} // namespace tween

#endif
