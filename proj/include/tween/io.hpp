#ifndef TWEEN_IO_HPP
#define TWEEN_IO_HPP

#include <tween/errors.hpp>
#include <tween/motion.hpp>

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace tween {

using json = nlohmann::json;

/// Shortest decimal that round-trips to the same double; "inf"/"-inf"/"nan"
/// for non-finite values.
[[nodiscard]] inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("failed to format double");
    return std::string(buf, ptr);
}

[[nodiscard]] inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

[[nodiscard]] inline json parse_json(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, e.byte, e.what());
    }
}

[[nodiscard]] inline json read_json_file(const std::filesystem::path& path)
{
    return parse_json(read_text_file(path), path.string());
}

// nlohmann's object type is an ordered std::map, so keys come out sorted.
inline void write_json_file(const std::filesystem::path& path, const json& doc)
{
    write_text_file(path, doc.dump(1) + "\n");
}

// -- motion file: {"J": int, "frames": [[[x,y,z] x J], ...], "label": int|null}

[[nodiscard]] inline json motion_to_json(const MotionSequence& seq)
{
    json frames = json::array();
    for (const auto& pose : seq.frames()) {
        json jf = json::array();
        for (int j = 0; j < pose.joints(); ++j)
            jf.push_back({pose.at(j, 0), pose.at(j, 1), pose.at(j, 2)});
        frames.push_back(std::move(jf));
    }
    json doc;
    doc["J"] = seq.joints();
    doc["frames"] = std::move(frames);
    doc["label"] = seq.intended_label() ? json(*seq.intended_label()) : json(nullptr);
    return doc;
}

[[nodiscard]] inline MotionSequence motion_from_json(const json& doc, const std::string& source = "<motion>")
{
    auto fail = [&](const std::string& what) -> ParseError { return ParseError(source, 0, what); };
    if (!doc.is_object()) throw fail("motion document must be an object");
    if (!doc.contains("J") || !doc["J"].is_number_integer()) throw fail("missing integer field \"J\"");
    if (!doc.contains("frames") || !doc["frames"].is_array()) throw fail("missing array field \"frames\"");
    const int joints = doc["J"].get<int>();
    if (joints < 1) throw fail("\"J\" must be positive");
    std::vector<Pose> frames;
    for (const auto& jf : doc["frames"]) {
        if (!jf.is_array() || jf.size() != static_cast<std::size_t>(joints))
            throw fail("frame " + std::to_string(frames.size()) + " does not have J joints");
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(joints) * 3);
        for (const auto& joint : jf) {
            if (!joint.is_array() || joint.size() != 3) throw fail("joint entry must be [x,y,z]");
            for (const auto& c : joint) {
                if (!c.is_number()) throw fail("joint coordinate must be a number");
                flat.push_back(c.get<double>());
            }
        }
        frames.emplace_back(std::move(flat));
    }
    if (frames.empty()) throw fail("motion needs at least one frame");
    std::optional<int> label;
    if (doc.contains("label") && !doc["label"].is_null()) {
        if (!doc["label"].is_number_integer()) throw fail("\"label\" must be an integer or null");
        label = doc["label"].get<int>();
    }
    return MotionSequence(std::move(frames), label);
}

[[nodiscard]] inline MotionSequence load_motion(const std::filesystem::path& path)
{
    return motion_from_json(read_json_file(path), path.string());
}

inline void save_motion(const std::filesystem::path& path, const MotionSequence& seq)
{
    write_json_file(path, motion_to_json(seq));
}

// -- condition file: {"x1": motion, "x2": motion}

[[nodiscard]] inline json condition_to_json(const BoundaryCondition& cond)
{
    return json{{"x1", motion_to_json(cond.x1)}, {"x2", motion_to_json(cond.x2)}};
}

[[nodiscard]] inline BoundaryCondition condition_from_json(const json& doc, const std::string& source = "<condition>")
{
    if (!doc.is_object() || !doc.contains("x1") || !doc.contains("x2"))
        throw ParseError(source, 0, "condition document needs \"x1\" and \"x2\"");
    BoundaryCondition cond{motion_from_json(doc["x1"], source + ":x1"), motion_from_json(doc["x2"], source + ":x2")};
    cond.validate();
    return cond;
}

[[nodiscard]] inline BoundaryCondition load_condition(const std::filesystem::path& path)
{
    return condition_from_json(read_json_file(path), path.string());
}

inline void save_condition(const std::filesystem::path& path, const BoundaryCondition& cond)
{
    write_json_file(path, condition_to_json(cond));
}

} // namespace tween

#endif
