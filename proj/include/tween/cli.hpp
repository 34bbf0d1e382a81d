#ifndef TWEEN_CLI_HPP
#define TWEEN_CLI_HPP

#include <tween/config.hpp>
#include <tween/criteria.hpp>
#include <tween/domain.hpp>
#include <tween/engine.hpp>
#include <tween/export.hpp>
#include <tween/io.hpp>
#include <tween/metrics.hpp>
#include <tween/theorems.hpp>

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tween::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kViolation = 3 };

namespace fs = std::filesystem;

struct Streams {
    std::ostream& out = std::cout;
    std::ostream& err = std::cerr;
};

namespace detail {

/// Flag values given on the command line, keyed by config key.
using Overrides = std::map<std::string, std::string>;

inline void kv_flag(CLI::App& app, const std::string& flag, const std::string& key, Overrides& overrides,
                    const std::string& help)
{
    app.add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
}

[[nodiscard]] inline KeyValueConfig merged(const std::string& config_path, const Overrides& overrides)
{
    KeyValueConfig kv = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    for (const auto& [k, v] : overrides) kv.set(k, v);
    return kv;
}

[[nodiscard]] inline std::uint64_t require_seed(const KeyValueConfig& kv)
{
    auto seed = kv.get_number<std::uint64_t>("seed");
    if (!seed) throw ValidationError("an explicit --seed is required");
    return *seed;
}

[[nodiscard]] inline std::string require(const KeyValueConfig& kv, const std::string& key)
{
    auto v = kv.get(key);
    if (!v || v->empty()) throw ValidationError("missing required setting '" + key + "'");
    return *v;
}

[[nodiscard]] inline std::vector<MotionSequence> load_motion_dir(const fs::path& dir)
{
    fs::path motions = fs::is_directory(dir / "motions") ? dir / "motions" : dir;
    if (!fs::is_directory(motions)) throw IoError("motion directory " + dir.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(motions))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no motion files in " + motions.string());
    std::vector<MotionSequence> out;
    for (const auto& f : files) out.push_back(load_motion(f));
    return out;
}

struct Models {
    std::shared_ptr<const SyntheticDomain> domain;
    std::shared_ptr<const NearestCentroidClassifier> classifier;
};

[[nodiscard]] inline Models load_models(const KeyValueConfig& kv)
{
    Models m;
    if (auto d = kv.get("domain")) m.domain = std::make_shared<const SyntheticDomain>(load_domain(*d));
    if (auto c = kv.get("classifier"))
        m.classifier = std::make_shared<const NearestCentroidClassifier>(load_classifier(*c));
    else if (m.domain)
        m.classifier = std::make_shared<const NearestCentroidClassifier>(m.domain->classifier());
    else
        throw ValidationError("need --classifier or --domain");
    return m;
}

// -- commands

inline int gen_domain(const KeyValueConfig& kv, Streams io)
{
    const auto seed = require_seed(kv);
    const int classes = kv.get_number<int>("classes").value_or(6);
    const int joints = kv.get_number<int>("joints").value_or(kDefaultJoints);
    const int keyframes = kv.get_number<int>("keyframes").value_or(5);
    const fs::path out = kv.get("out").value_or(".");
    const auto dom = make_synthetic_domain(classes, joints, seed);
    write_json_file(out / "domain.json", domain_to_json(dom));
    write_json_file(out / "classifier.json", classifier_to_json(dom.classifier()));
    save_condition(out / "condition.json", make_condition(dom, keyframes, SeededStream(seed, {0xc0})));
    io.out << "wrote " << (out / "domain.json").string() << ", " << (out / "classifier.json").string() << ", "
           << (out / "condition.json").string() << "\n";
    return kOk;
}

inline int run_or_baseline(const KeyValueConfig& kv, bool baseline, Streams io)
{
    RunConfig cfg = run_config_from(kv);
    cfg.seed = require_seed(kv);
    if (baseline) cfg.tau_max = 0;
    cfg.validate();
    const Models models = load_models(kv);
    cfg.classifier_ref = kv.get("classifier").value_or(std::string{});
    if (cfg.generator_id == "mixture" && !models.domain) throw ValidationError("the mixture generator needs --domain");
    const auto cond = load_condition(require(kv, "condition"));
    const auto gen = make_generator(cfg, models.domain);
    const RunResult result = run(cfg, cond, *gen, *models.classifier);

    const fs::path out = kv.get("out").value_or("out");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < result.final.members.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "motion_%03zu.json", i);
        names.emplace_back(std::string("motions/") + name);
        save_motion(out / names.back(), result.final.members[i].seq);
    }
    write_json_file(out / "result.json", result_to_json(result, names));
    write_text_file(out / "history.csv", history_csv(result.history));
    write_text_file(out / "front.csv", history_csv(result.history, true, result.history.back().generation));
    io.out << (baseline ? "baseline" : "run") << ": " << result.final.members.size() << " sequences, y_len " << result.y_len
           << ", " << result.history.size() - 1 << " generations, " << format_double(result.wall_time) << " s -> "
           << out.string() << "\n";
    return kOk;
}

[[nodiscard]] inline json arm_metrics(const std::vector<MotionSequence>& set, const std::vector<MotionSequence>& ref_train,
                                      const std::vector<MotionSequence>& ref_test, const MotionSequence& gt,
                                      const Classifier& guide, const Classifier* acc_model)
{
    const auto s = summarize(std::span<const MotionSequence>(set));
    json j{{"fid_tr", fid(s, summarize(std::span<const MotionSequence>(ref_train)))},
           {"fid_te", fid(s, summarize(std::span<const MotionSequence>(ref_test)))},
           {"ade", ade(set, gt)},
           {"apd", set.size() >= 2 ? json(apd(set)) : json(nullptr)},
           {"class_coverage", class_coverage(set, guide)}};
    const bool labelled = std::all_of(set.begin(), set.end(), [](const auto& m) { return m.intended_label().has_value(); });
    j["acc"] = acc_model && labelled ? json(acc(set, *acc_model)) : json(nullptr);
    return j;
}

inline int eval(const KeyValueConfig& kv, const std::map<std::string, std::string>& paths, Streams io)
{
    auto path = [&](const std::string& k) -> std::optional<std::string> {
        auto it = paths.find(k);
        if (it == paths.end() || it->second.empty()) return std::nullopt;
        return it->second;
    };
    const auto seed = require_seed(kv);
    const Models models = load_models(kv);
    const auto run_dir = path("run");
    const auto ref_dir = path("reference");
    if (!run_dir) throw ValidationError("eval needs --run");
    if (!ref_dir) throw ValidationError("eval needs --reference");
    const auto guided = load_motion_dir(*run_dir);
    const auto ref_train = load_motion_dir(*ref_dir);
    const auto ref_test = path("reference-test") ? load_motion_dir(*path("reference-test")) : ref_train;
    const MotionSequence gt = path("gt") ? load_motion(*path("gt")) : ref_train.front();

    std::optional<NearestCentroidClassifier> heldout;
    if (models.domain) heldout = make_heldout_classifier(*models.domain, seed);
    const Classifier* acc_model = heldout ? static_cast<const Classifier*>(&*heldout) : models.classifier.get();

    json report;
    report["guided"] = arm_metrics(guided, ref_train, ref_test, gt, *models.classifier, acc_model);
    if (auto b = path("baseline"))
        report["unguided"] = arm_metrics(load_motion_dir(*b), ref_train, ref_test, gt, *models.classifier, acc_model);

    const fs::path out = kv.get("out").value_or("eval");
    write_json_file(out / "metrics.json", report);
    std::ostringstream csv;
    csv << "arm,fid_tr,fid_te,acc,ade,apd,class_coverage\n";
    auto cell = [](const json& v) { return v.is_null() ? std::string{} : v.is_number_integer() ? std::to_string(v.get<long>()) : format_double(v.get<double>()); };
    for (const auto& [arm, m] : report.items())
        csv << arm << ',' << cell(m["fid_tr"]) << ',' << cell(m["fid_te"]) << ',' << cell(m["acc"]) << ',' << cell(m["ade"])
            << ',' << cell(m["apd"]) << ',' << cell(m["class_coverage"]) << '\n';
    write_text_file(out / "metrics.csv", csv.str());
    io.out << csv.str();
    return kOk;
}

inline int export_front(const std::string& result_path, std::optional<int> generation, bool all_ranks,
                        const std::string& out_path, Streams io)
{
    if (result_path.empty()) throw ValidationError("export-front needs --result");
    const auto history = history_from_json(read_json_file(result_path), result_path);
    if (history.empty()) throw ParseError(result_path, 0, "result has no history");
    std::optional<int> gen = generation;
    if (gen && std::none_of(history.begin(), history.end(), [&](const auto& s) { return s.generation == *gen; }))
        throw ValidationError("generation " + std::to_string(*gen) + " not present in " + result_path);
    const auto csv = history_csv(history, !all_ranks, gen);
    if (out_path.empty())
        io.out << csv;
    else
        write_text_file(out_path, csv);
    return kOk;
}

inline int verify_theorems(const KeyValueConfig& kv, bool inject_fault, Streams io)
{
    const auto seed = require_seed(kv);
    const long sets = kv.get_number<long>("sets").value_or(1000);
    const long candidates = kv.get_number<long>("candidates").value_or(50);
    const int classes = kv.get_number<int>("classes").value_or(6);
    const int joints = kv.get_number<int>("joints").value_or(kDefaultJoints);
    if (sets < 1) throw ValidationError("--sets must be >= 1");
    if (candidates < 2) throw ValidationError("--candidates must be >= 2");

    const auto dom = std::make_shared<const SyntheticDomain>(make_synthetic_domain(classes, joints, seed));
    const auto model = dom->classifier();
    const DominanceFn dom_fn = inject_fault ? DominanceFn(faulty_dominates) : DominanceFn(dominates);
    const SeededStream root(seed, {0x7e});

    std::size_t t1_checked = 0, t2_checked = 0, t2_qualifying = 0, skipped = 0;
    json dumped = json::array();
    for (long s = 0; s < sets; ++s) {
        const auto pts = random_candidate_set(dom, model, static_cast<std::size_t>(candidates), root.child(static_cast<std::uint64_t>(s)));
        const auto r1 = verify_theorem_1(pts, dom_fn);
        const auto r2 = verify_theorem_2(pts, classes);
        skipped += r1.skipped ? 1 : 0;
        t1_checked += r1.checked;
        t2_checked += r2.checked;
        t2_qualifying += r2.qualifying;
        if (!r1.violations.empty() || !r2.violations.empty()) {
            json inst{{"set", s}, {"theorem1", json::array()}, {"theorem2", json::array()}, {"candidates", json::array()}};
            for (const auto& v : r1.violations) inst["theorem1"].push_back({{"indices", v.indices}, {"detail", v.detail}});
            for (const auto& v : r2.violations) inst["theorem2"].push_back({{"indices", v.indices}, {"detail", v.detail}});
            for (const auto& c : pts) inst["candidates"].push_back(member_to_json({c, 0, 0.0}));
            dumped.push_back(std::move(inst));
        }
    }
    json report{{"seed", seed},
                {"sets", sets},
                {"candidates", candidates},
                {"classes", classes},
                {"skipped_sets", skipped},
                {"theorem1_checked", t1_checked},
                {"theorem2_pairs", t2_checked},
                {"theorem2_qualifying_pairs", t2_qualifying},
                {"violating_sets", dumped.size()},
                {"violations", dumped}};
    if (auto out = kv.get("out")) write_json_file(fs::path(*out) / "theorems.json", report);
    io.out << "theorem 1: " << t1_checked << " beta-minimal members checked; theorem 2: " << t2_checked << " pairs ("
           << t2_qualifying << " above 4/D); skipped sets: " << skipped << "; violating sets: " << dumped.size() << "\n";
    if (!dumped.empty()) {
        if (!kv.get("out")) io.err << dumped.dump(1) << "\n";
        return kViolation;
    }
    return kOk;
}

} // namespace detail

/// Parses argv and dispatches; returns the process exit code.
inline int main(int argc, const char* const* argv, Streams io = {})
{
    CLI::App app{"Pareto-guided motion transition sampler"};
    app.require_subcommand(1);
    std::string config_path;
    detail::Overrides overrides;
    app.add_option("--config", config_path, "key=value config file");

    auto add_common = [&](CLI::App* sub) {
        detail::kv_flag(*sub, "--seed", "seed", overrides, "root random seed (required)");
        detail::kv_flag(*sub, "--out", "out", overrides, "output directory");
        sub->add_option("--config", config_path, "key=value config file");
    };
    auto add_run_flags = [&](CLI::App* sub) {
        add_common(sub);
        detail::kv_flag(*sub, "--domain", "domain", overrides, "domain JSON");
        detail::kv_flag(*sub, "--classifier", "classifier", overrides, "classifier model JSON");
        detail::kv_flag(*sub, "--condition", "condition", overrides, "boundary condition JSON");
        detail::kv_flag(*sub, "--pop", "pop", overrides, "population size l");
        detail::kv_flag(*sub, "--offspring", "offspring", overrides, "offspring per generation m");
        detail::kv_flag(*sub, "--tau-max", "tau_max", overrides, "number of generations");
        detail::kv_flag(*sub, "--y-min", "y_min", overrides, "minimum transition length");
        detail::kv_flag(*sub, "--y-max", "y_max", overrides, "maximum transition length");
        detail::kv_flag(*sub, "--generator", "generator", overrides, "interp | mixture");
        detail::kv_flag(*sub, "--amplitude", "amplitude", overrides, "interp generator noise scale");
        detail::kv_flag(*sub, "--sigma-mut", "sigma_mut", overrides, "local move scale");
        detail::kv_flag(*sub, "--p-keep", "p_keep", overrides, "mixture: probability of keeping the parent class");
        detail::kv_flag(*sub, "--warp-tolerance", "warp_tolerance", overrides, "mixture: max endpoint offset");
        detail::kv_flag(*sub, "--threads", "threads", overrides, "worker threads for offspring evaluation");
    };

    auto* gen = app.add_subcommand("gen-domain", "generate a synthetic domain, classifier and condition");
    add_common(gen);
    detail::kv_flag(*gen, "--classes", "classes", overrides, "number of classes D");
    detail::kv_flag(*gen, "--joints", "joints", overrides, "number of joints J");
    detail::kv_flag(*gen, "--keyframes", "keyframes", overrides, "frames per keyframe sequence");

    auto* run_cmd = app.add_subcommand("run", "guided sampling");
    add_run_flags(run_cmd);
    auto* base_cmd = app.add_subcommand("baseline", "unguided sampling (initial draws only)");
    add_run_flags(base_cmd);

    std::map<std::string, std::string> eval_paths;
    auto* eval_cmd = app.add_subcommand("eval", "metrics for guided and baseline outputs");
    add_common(eval_cmd);
    detail::kv_flag(*eval_cmd, "--domain", "domain", overrides, "domain JSON (held-out ACC classifier)");
    detail::kv_flag(*eval_cmd, "--classifier", "classifier", overrides, "classifier model JSON");
    for (const char* k : {"run", "baseline", "reference", "reference-test", "gt"})
        eval_cmd->add_option(std::string("--") + k, eval_paths[k], std::string(k) + " path");

    std::string result_path, front_out;
    std::optional<int> front_generation;
    bool all_ranks = false;
    auto* exp_cmd = app.add_subcommand("export-front", "Pareto front CSV from a result file");
    exp_cmd->add_option("--result", result_path, "result.json")->required();
    exp_cmd->add_option("--generation", front_generation, "generation (default: all)");
    exp_cmd->add_flag("--all-ranks", all_ranks, "include dominated members");
    exp_cmd->add_option("--out", front_out, "output CSV (default: stdout)");

    bool inject_fault = false;
    auto* ver_cmd = app.add_subcommand("verify-theorems", "randomized checks of the Pareto-optimality theorems");
    add_common(ver_cmd);
    detail::kv_flag(*ver_cmd, "--sets", "sets", overrides, "number of candidate sets");
    detail::kv_flag(*ver_cmd, "--candidates", "candidates", overrides, "candidates per set");
    detail::kv_flag(*ver_cmd, "--classes", "classes", overrides, "number of classes D");
    detail::kv_flag(*ver_cmd, "--joints", "joints", overrides, "number of joints J");
    ver_cmd->add_flag("--inject-fault", inject_fault, "use a deliberately wrong dominance test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        io.out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        io.err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        const auto kv = detail::merged(config_path, overrides);
        if (gen->parsed()) return detail::gen_domain(kv, io);
        if (run_cmd->parsed()) return detail::run_or_baseline(kv, false, io);
        if (base_cmd->parsed()) return detail::run_or_baseline(kv, true, io);
        if (eval_cmd->parsed()) return detail::eval(kv, eval_paths, io);
        if (exp_cmd->parsed()) return detail::export_front(result_path, front_generation, all_ranks, front_out, io);
        if (ver_cmd->parsed()) return detail::verify_theorems(kv, inject_fault, io);
    } catch (const IoError& e) {
        io.err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError& e) {
        io.err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const EngineError& e) {
        io.err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kValidation;
}

} // namespace tween::cli

#endif
