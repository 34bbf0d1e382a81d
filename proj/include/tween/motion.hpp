#ifndef TWEEN_MOTION_HPP
#define TWEEN_MOTION_HPP

#include <tween/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tween {

inline constexpr int kDefaultJoints = 16;

/// One skeleton configuration: J joints x 3 coordinates, stored flat as
/// [x0 y0 z0 x1 y1 z1 ...] in normalized units (root at the origin,
/// root-to-head length 1).
class Pose {
public:
    Pose() = default;

    explicit Pose(int joints) : coords_(static_cast<std::size_t>(joints) * 3, 0.0)
    {
        if (joints < 1) throw ValidationError("pose needs at least one joint");
    }

    explicit Pose(std::vector<double> flat) : coords_(std::move(flat))
    {
        if (coords_.empty() || coords_.size() % 3 != 0)
            throw DimensionError("pose coordinate count " + std::to_string(coords_.size()) + " is not a positive multiple of 3");
        for (double c : coords_)
            if (!std::isfinite(c)) throw ValidationError("pose coordinate is not finite");
    }

    [[nodiscard]] int joints() const noexcept { return static_cast<int>(coords_.size() / 3); }
    [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }

    [[nodiscard]] std::span<const double> flat() const noexcept { return coords_; }
    [[nodiscard]] std::span<double> flat() noexcept { return coords_; }

    [[nodiscard]] double& at(int joint, int axis) { return coords_[static_cast<std::size_t>(joint) * 3 + axis]; }
    [[nodiscard]] double at(int joint, int axis) const { return coords_[static_cast<std::size_t>(joint) * 3 + axis]; }

    [[nodiscard]] double norm() const noexcept
    {
        return std::sqrt(std::inner_product(coords_.begin(), coords_.end(), coords_.begin(), 0.0));
    }

    friend bool operator==(const Pose&, const Pose&) = default;

private:
    std::vector<double> coords_;
};

[[nodiscard]] inline double distance(const Pose& a, const Pose& b)
{
    if (a.size() != b.size())
        throw DimensionError("pose joint count mismatch: " + std::to_string(a.joints()) + " vs " + std::to_string(b.joints()));
    double acc = 0.0;
    auto pa = a.flat();
    auto pb = b.flat();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        double d = pa[i] - pb[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

/// Ordered frames of poses with an optional class label assigned by the
/// generator that produced it.
class MotionSequence {
public:
    MotionSequence() = default;

    explicit MotionSequence(std::vector<Pose> frames, std::optional<int> intended_label = std::nullopt)
        : frames_(std::move(frames)), intended_label_(intended_label)
    {
        if (frames_.empty()) throw ValidationError("motion sequence needs at least one frame");
        const int j = frames_.front().joints();
        if (j < 1) throw ValidationError("motion sequence frames must have at least one joint");
        for (const auto& f : frames_)
            if (f.joints() != j) throw DimensionError("motion sequence frames disagree on joint count");
    }

    [[nodiscard]] std::size_t length() const noexcept { return frames_.size(); }
    [[nodiscard]] int joints() const noexcept { return frames_.empty() ? 0 : frames_.front().joints(); }

    [[nodiscard]] const Pose& operator[](std::size_t t) const { return frames_[t]; }
    [[nodiscard]] const Pose& front() const { return frames_.front(); }
    [[nodiscard]] const Pose& back() const { return frames_.back(); }
    [[nodiscard]] const std::vector<Pose>& frames() const noexcept { return frames_; }

    [[nodiscard]] std::optional<int> intended_label() const noexcept { return intended_label_; }
    void set_intended_label(std::optional<int> label) noexcept { intended_label_ = label; }

    /// All frames concatenated, frame-major.
    [[nodiscard]] std::vector<double> flatten() const
    {
        std::vector<double> out;
        out.reserve(frames_.size() * frames_.front().size());
        for (const auto& f : frames_) out.insert(out.end(), f.flat().begin(), f.flat().end());
        return out;
    }

    friend bool operator==(const MotionSequence&, const MotionSequence&) = default;

private:
    std::vector<Pose> frames_;
    std::optional<int> intended_label_;
};

struct BoundaryCondition {
    MotionSequence x1;
    MotionSequence x2;

    [[nodiscard]] int joints() const noexcept { return x1.joints(); }
    [[nodiscard]] const Pose& start() const { return x1.back(); }
    [[nodiscard]] const Pose& end() const { return x2.front(); }

    void validate() const
    {
        if (x1.length() == 0 || x2.length() == 0) throw ValidationError("boundary sequences must be nonempty");
        if (x1.joints() != x2.joints()) throw DimensionError("boundary sequences disagree on joint count");
    }
};

struct LengthPolicy {
    int y_min = 5;
    int y_max = 15;

    void validate() const
    {
        if (y_min < 1 || y_min > y_max)
            throw ValidationError("length policy requires 1 <= y_min <= y_max (got " + std::to_string(y_min) + ", " + std::to_string(y_max) + ")");
    }
};

/// Cosine similarity between the last pose of x1 and the first pose of x2,
/// clamped below at 0.
[[nodiscard]] inline double boundary_similarity(const MotionSequence& x1, const MotionSequence& x2)
{
    const Pose& a = x1.back();
    const Pose& b = x2.front();
    if (a.size() != b.size()) throw DimensionError("boundary poses disagree on joint count");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw DegenerateInputError("zero-norm boundary pose");
    auto pa = a.flat();
    auto pb = b.flat();
    const double dot = std::inner_product(pa.begin(), pa.end(), pb.begin(), 0.0);
    return std::clamp(dot / (na * nb), 0.0, 1.0);
}

[[nodiscard]] inline double boundary_similarity(const BoundaryCondition& cond)
{
    return boundary_similarity(cond.x1, cond.x2);
}

/// Y_len = y_min + floor((y_max - y_min) * (1 - S)).
[[nodiscard]] inline int estimate_transition_length(double similarity, const LengthPolicy& policy)
{
    if (!(similarity >= 0.0 && similarity <= 1.0))
        throw RangeError("similarity must lie in [0,1]");
    policy.validate();
    const double span = static_cast<double>(policy.y_max - policy.y_min);
    const int extra = static_cast<int>(std::floor(span * (1.0 - similarity)));
    return std::clamp(policy.y_min + extra, policy.y_min, policy.y_max);
}

/// Repeats the last frame until the sequence has y_max frames.
[[nodiscard]] inline MotionSequence pad_to_max(const MotionSequence& seq, int y_max)
{
    if (y_max < 0 || seq.length() > static_cast<std::size_t>(y_max))
        throw RangeError("sequence of length " + std::to_string(seq.length()) + " exceeds y_max " + std::to_string(y_max));
    std::vector<Pose> frames = seq.frames();
    frames.resize(static_cast<std::size_t>(y_max), seq.back());
    return MotionSequence(std::move(frames), seq.intended_label());
}

/// Number of frames before the trailing run of copies of the last frame.
[[nodiscard]] inline std::size_t unpadded_length(const MotionSequence& seq)
{
    std::size_t n = seq.length();
    while (n > 1 && seq[n - 2] == seq.back()) --n;
    return n;
}

/// Translates every frame by the first frame's root position and scales so
/// that the first frame's root-to-head distance is 1.
[[nodiscard]] inline MotionSequence normalize(const MotionSequence& seq, int root_joint, int head_joint)
{
    const int j = seq.joints();
    if (root_joint < 0 || root_joint >= j || head_joint < 0 || head_joint >= j || root_joint == head_joint)
        throw ValidationError("invalid root/head joint indices");
    const Pose& ref = seq.front();
    double scale = 0.0;
    for (int a = 0; a < 3; ++a) {
        double d = ref.at(head_joint, a) - ref.at(root_joint, a);
        scale += d * d;
    }
    scale = std::sqrt(scale);
    if (scale == 0.0) throw DegenerateInputError("root and head coincide");
    std::vector<Pose> frames;
    frames.reserve(seq.length());
    for (const auto& f : seq.frames()) {
        Pose p(j);
        for (int k = 0; k < j; ++k)
            for (int a = 0; a < 3; ++a) p.at(k, a) = (f.at(k, a) - ref.at(root_joint, a)) / scale;
        frames.push_back(std::move(p));
    }
    return MotionSequence(std::move(frames), seq.intended_label());
}

} // namespace tween

#endif
