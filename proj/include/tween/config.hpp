#ifndef TWEEN_CONFIG_HPP
#define TWEEN_CONFIG_HPP

#include <tween/engine.hpp>
#include <tween/errors.hpp>
#include <tween/io.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace tween {

/// Recognized config keys. Every RunConfig field has one.
inline constexpr std::array<std::string_view, 21> kConfigKeys = {
    "pop",       "offspring", "tau_max",    "y_min",      "y_max",     "seed",       "generator",
    "amplitude", "sigma_mut", "p_keep",     "warp_tolerance", "threads", "classes",  "joints",
    "keyframes", "domain",    "classifier", "condition",  "out",       "sets",       "candidates",
};

[[nodiscard]] inline bool is_config_key(std::string_view key)
{
    return std::find(kConfigKeys.begin(), kConfigKeys.end(), key) != kConfigKeys.end();
}

/// Flat key=value settings: one pair per line, '#' starts a comment, blank
/// lines ignored. Later assignments override earlier ones.
class KeyValueConfig {
public:
    void set(const std::string& key, const std::string& value)
    {
        if (!is_config_key(key)) throw ValidationError("unknown config key '" + key + "'");
        values_[key] = value;
    }

    [[nodiscard]] static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>")
    {
        KeyValueConfig cfg;
        std::size_t line_no = 0;
        while (!text.empty()) {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ValidationError(source + ":" + std::to_string(line_no) + ": expected key=value");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (!is_config_key(key))
                throw ValidationError(source + ":" + std::to_string(line_no) + ": unknown config key '" + key + "'");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    [[nodiscard]] static KeyValueConfig load(const std::filesystem::path& path)
    {
        return parse(read_text_file(path), path.string());
    }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    template <class T>
    [[nodiscard]] std::optional<T> get_number(const std::string& key) const
    {
        auto v = get(key);
        if (!v) return std::nullopt;
        T out{};
        auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || ptr != v->data() + v->size())
            throw ValidationError("config key '" + key + "' expects a number, got '" + *v + "'");
        return out;
    }

    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    [[nodiscard]] static std::string_view trim(std::string_view s)
    {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    std::map<std::string, std::string> values_;
};

/// Applies recognized keys on top of `base`.
[[nodiscard]] inline RunConfig run_config_from(const KeyValueConfig& kv, RunConfig base = {})
{
    if (auto v = kv.get_number<std::size_t>("pop")) base.l = *v;
    if (auto v = kv.get_number<std::size_t>("offspring")) base.m = *v;
    if (auto v = kv.get_number<int>("tau_max")) base.tau_max = *v;
    if (auto v = kv.get_number<int>("y_min")) base.length_policy.y_min = *v;
    if (auto v = kv.get_number<int>("y_max")) base.length_policy.y_max = *v;
    if (auto v = kv.get_number<std::uint64_t>("seed")) base.seed = *v;
    if (auto v = kv.get("generator")) base.generator_id = *v;
    if (auto v = kv.get_number<double>("amplitude")) base.knobs.amplitude = *v;
    if (auto v = kv.get_number<double>("sigma_mut")) base.knobs.sigma_mut = *v;
    if (auto v = kv.get_number<double>("p_keep")) base.knobs.p_keep = *v;
    if (auto v = kv.get_number<double>("warp_tolerance")) base.knobs.warp_tolerance = *v;
    if (auto v = kv.get_number<int>("threads")) base.threads = *v;
    if (auto v = kv.get("classifier")) base.classifier_ref = *v;
    return base;
}

} // namespace tween

#endif
