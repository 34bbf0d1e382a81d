#ifndef TWEEN_EXPORT_HPP
#define TWEEN_EXPORT_HPP

#include <tween/engine.hpp>
#include <tween/io.hpp>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tween {

inline constexpr const char* kFrontCsvHeader = "generation,index,f1,f2,alpha1,alpha2,beta,label,confidence,rank,crowding";

inline void append_csv_row(std::ostringstream& out, int generation, std::size_t index, const MemberRecord& m)
{
    const auto& c = m.criteria;
    out << generation << ',' << index << ',' << format_double(c.f1) << ',' << format_double(c.f2) << ','
        << format_double(c.alpha1) << ',' << format_double(c.alpha2) << ',' << format_double(c.beta) << ',' << c.label << ','
        << format_double(c.confidence) << ',' << m.rank << ',' << format_double(m.crowding) << '\n';
}

/// Per-generation criteria table. With front_only, only rank-0 rows are
/// written; `generation`, when set, restricts output to that generation.
[[nodiscard]] inline std::string history_csv(const std::vector<GenerationSnapshot>& history, bool front_only = false,
                                             std::optional<int> generation = std::nullopt)
{
    std::ostringstream out;
    out << kFrontCsvHeader << '\n';
    for (const auto& snap : history) {
        if (generation && snap.generation != *generation) continue;
        for (std::size_t i = 0; i < snap.members.size(); ++i)
            if (!front_only || snap.members[i].rank == 0) append_csv_row(out, snap.generation, i, snap.members[i]);
    }
    return out.str();
}

[[nodiscard]] inline json number_or_inf(double v)
{
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

[[nodiscard]] inline double number_from_json(const json& v)
{
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("<json>", 0, "unexpected string number '" + s + "'");
    }
    return v.get<double>();
}

[[nodiscard]] inline json config_to_json(const RunConfig& c)
{
    return json{{"l", c.l},
                {"m", c.m},
                {"tau_max", c.tau_max},
                {"y_min", c.length_policy.y_min},
                {"y_max", c.length_policy.y_max},
                {"seed", c.seed},
                {"generator", c.generator_id},
                {"amplitude", c.knobs.amplitude},
                {"sigma_mut", c.knobs.sigma_mut},
                {"p_keep", c.knobs.p_keep},
                {"warp_tolerance", c.knobs.warp_tolerance},
                {"classifier", c.classifier_ref}};
}

[[nodiscard]] inline json member_to_json(const MemberRecord& m)
{
    const auto& c = m.criteria;
    return json{{"f1", c.f1},         {"f2", c.f2},       {"alpha1", c.alpha1},
                {"alpha2", c.alpha2}, {"beta", c.beta},   {"label", c.label},
                {"confidence", c.confidence}, {"rank", m.rank}, {"crowding", number_or_inf(m.crowding)}};
}

[[nodiscard]] inline MemberRecord member_from_json(const json& j)
{
    MemberRecord m;
    m.criteria.f1 = j.at("f1").get<double>();
    m.criteria.f2 = j.at("f2").get<double>();
    m.criteria.alpha1 = j.at("alpha1").get<double>();
    m.criteria.alpha2 = j.at("alpha2").get<double>();
    m.criteria.beta = j.at("beta").get<double>();
    m.criteria.label = j.at("label").get<int>();
    m.criteria.confidence = j.at("confidence").get<double>();
    m.rank = j.at("rank").get<int>();
    m.crowding = number_from_json(j.at("crowding"));
    return m;
}

/// Full run export. wall_time is left out so that equal seeds give equal
/// bytes.
[[nodiscard]] inline json result_to_json(const RunResult& r, const std::vector<std::string>& motion_files = {})
{
    json history = json::array();
    for (const auto& snap : r.history) {
        json members = json::array();
        for (const auto& m : snap.members) members.push_back(member_to_json(m));
        history.push_back({{"generation", snap.generation}, {"members", std::move(members)}});
    }
    json final_members = json::array();
    for (std::size_t i = 0; i < r.final.members.size(); ++i) {
        const auto& ind = r.final.members[i];
        json m = member_to_json({ind.criteria, ind.rank, ind.crowding});
        m["intended_label"] = ind.seq.intended_label() ? json(*ind.seq.intended_label()) : json(nullptr);
        if (i < motion_files.size()) m["motion"] = motion_files[i];
        final_members.push_back(std::move(m));
    }
    return json{{"config", config_to_json(r.config)},
                {"similarity", r.similarity},
                {"y_len", r.y_len},
                {"history", std::move(history)},
                {"final", std::move(final_members)}};
}

[[nodiscard]] inline std::vector<GenerationSnapshot> history_from_json(const json& doc, const std::string& source = "<result>")
{
    try {
        std::vector<GenerationSnapshot> out;
        for (const auto& snap : doc.at("history")) {
            GenerationSnapshot s;
            s.generation = snap.at("generation").get<int>();
            for (const auto& m : snap.at("members")) s.members.push_back(member_from_json(m));
            out.push_back(std::move(s));
        }
        return out;
    } catch (const json::exception& e) {
        throw ParseError(source, 0, e.what());
    }
}

} // namespace tween

#endif
