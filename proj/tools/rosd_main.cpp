// rosd: review-stream simulation, trust scoring, attack injection, and
// benchmark reporting in one binary.
//
// Exit codes: 0 success, 1 usage/config error (bad flags, bad scenario
// config, missing labels), 2 I/O failure, 3 dataset parse/integrity error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rosd/dataset_io.hpp"
#include "rosd/engine.hpp"
#include "rosd/metrics.hpp"
#include "rosd/scores_io.hpp"
#include "rosd/simulator.hpp"
#include "rosd/version.hpp"

namespace {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// One manifest per command invocation, next to the primary output:
/// <output>.manifest.json. Records enough to replay the run.
void write_manifest(const std::filesystem::path& primary_output, const std::string& command_line,
                    std::optional<std::uint64_t> seed, const std::string& effective_config,
                    const std::vector<std::string>& outputs) {
    json j{
        {"tool", "rosd"},
        {"version", rosd::kVersion},
        {"command", command_line},
        {"config_hash", hex64(fnv1a64(effective_config))},
        {"created_utc", utc_now()},
        {"outputs", outputs},
    };
    if (seed) j["seed"] = *seed;
    const auto path = primary_output.string() + ".manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw rosd::IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw rosd::IoError("write failed: " + path);
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

rosd::FileFormat resolve_format(const std::string& flag, const std::filesystem::path& path) {
    return flag.empty() ? rosd::format_for_path(path) : rosd::format_from_name(flag);
}

std::optional<std::uint64_t> env_seed() {
    const char* env = std::getenv("ROSD_SEED");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
        throw rosd::ConfigError(std::string("bad ROSD_SEED value: '") + env + "'");
    return v;
}

struct SimulateArgs {
    std::string config_path, preset, dump_preset, output, format;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, const std::string& command_line) {
    if (!a.dump_preset.empty()) {
        const auto cfg = rosd::scenario_preset(a.dump_preset);
        if (a.output.empty())
            std::cout << rosd::scenario_to_json(cfg).dump(2) << '\n';
        else
            rosd::save_scenario(cfg, a.output);
        return 0;
    }
    rosd::ScenarioConfig cfg;
    if (!a.preset.empty() && !a.config_path.empty())
        throw rosd::ConfigError("--preset and --config are mutually exclusive");
    if (!a.preset.empty())
        cfg = rosd::scenario_preset(a.preset);
    else if (!a.config_path.empty())
        cfg = rosd::load_scenario(a.config_path);
    else
        throw rosd::ConfigError("simulate needs --preset or --config");
    if (a.output.empty()) throw rosd::ConfigError("simulate needs --output");

    if (auto seed = a.seed ? a.seed : env_seed()) cfg.seed = *seed;
    const rosd::Dataset d = rosd::run_scenario(cfg);
    rosd::save_dataset(d, a.output, resolve_format(a.format, a.output));
    write_manifest(a.output, command_line, cfg.seed, rosd::scenario_to_json(cfg).dump(),
                   {a.output});
    std::cerr << "simulate: wrote " << d.num_reviews() << " reviews, " << d.num_reviewers()
              << " reviewers, " << d.num_products() << " products to " << a.output << '\n';
    return 0;
}

struct DetectArgs {
    std::string input, output, in_format, out_format;
    double tolerance = rosd::SolverConfig{}.tolerance;
    int max_iters = rosd::SolverConfig{}.max_iterations;
    double initial = rosd::SolverConfig{}.initial_value;
};

int cmd_detect(const DetectArgs& a, const std::string& command_line) {
    const rosd::Dataset d = rosd::load_dataset(a.input, resolve_format(a.in_format, a.input));
    rosd::SolverConfig cfg;
    cfg.tolerance = a.tolerance;
    cfg.max_iterations = a.max_iters;
    cfg.initial_value = a.initial;
    const rosd::SolverResult res = rosd::solve(d, cfg);
    const rosd::RunMeta meta{res.iterations, res.converged, res.final_delta, cfg.tolerance};
    rosd::save_scores(d, res.state, meta, a.output, resolve_format(a.out_format, a.output));
    const std::string effective = "tolerance=" + rosd::format_double(cfg.tolerance) +
                                  " max_iterations=" + std::to_string(cfg.max_iterations) +
                                  " initial=" + rosd::format_double(cfg.initial_value);
    write_manifest(a.output, command_line, std::nullopt, effective, {a.output});
    if (!res.converged)
        std::cerr << "warning: not converged after " << res.iterations
                  << " iterations (last delta " << res.final_delta << ")\n";
    else
        std::cerr << "detect: converged in " << res.iterations << " iterations to "
                  << a.output << '\n';
    return 0;
}

struct InjectArgs {
    std::string input, output, preset, kind = "over_product", attacker_id;
    std::vector<std::string> targets;
    double score = 0.5;
    int n_reviews = 20;
    bool honest_elsewhere = true;
    std::optional<std::uint64_t> seed;
};

int cmd_inject(const InjectArgs& a, const std::string& command_line) {
    const rosd::Dataset d = rosd::load_dataset(a.input);
    rosd::AttackScript script;
    script.kind = rosd::attack_kind_from_name(a.kind);
    script.attack_score = a.score;
    script.honest_elsewhere = a.honest_elsewhere;
    script.target_products = a.targets;
    if (!a.preset.empty()) {
        if (a.preset == "inject-slander") {
            script.kind = rosd::AttackKind::over_product;
            script.attack_score = 0.5;
            script.honest_elsewhere = true;
            if (script.target_products.empty())
                script.target_products = rosd::pick_injection_targets(d, /*high_scored=*/true, 5);
        } else if (a.preset == "inject-promote") {
            script.kind = rosd::AttackKind::over_product;
            script.attack_score = 5.0;
            script.honest_elsewhere = true;
            if (script.target_products.empty())
                script.target_products = rosd::pick_injection_targets(d, /*high_scored=*/false, 5);
        } else {
            throw rosd::ConfigError("unknown inject preset: '" + a.preset +
                                    "' (inject-slander, inject-promote)");
        }
        if (script.target_products.empty())
            throw rosd::ConfigError("preset found no suitable target products");
    }
    if (script.target_products.empty()) throw rosd::ConfigError("inject needs --targets");

    const std::uint64_t seed = a.seed ? *a.seed : env_seed().value_or(1);
    rosd::SeededRng rng(seed);
    const rosd::Dataset out =
        rosd::inject_attacker(d, script, a.n_reviews, rng, a.attacker_id);
    rosd::save_dataset(out, a.output, rosd::format_for_path(a.output));

    json effective{{"kind", rosd::attack_kind_name(script.kind)},
                   {"targets", script.target_products},
                   {"attack_score", script.attack_score},
                   {"honest_elsewhere", script.honest_elsewhere},
                   {"n_reviews", a.n_reviews}};
    write_manifest(a.output, command_line, seed, effective.dump(), {a.output});
    std::cerr << "inject: " << d.num_reviews() << " -> " << out.num_reviews() << " reviews ("
              << script.target_products.size() << " targets) to " << a.output << '\n';
    return 0;
}

struct EvaluateArgs {
    std::string dataset, scores, output;
    std::optional<double> threshold;
};

int cmd_evaluate(const EvaluateArgs& a, const std::string& command_line) {
    const rosd::Dataset d = rosd::load_dataset(a.dataset);
    const auto [state, meta] = rosd::load_scores(d, a.scores, rosd::format_for_path(a.scores));
    rosd::SolverConfig before_cfg;
    if (meta.tolerance > 0.0) before_cfg.tolerance = meta.tolerance;
    const rosd::EvaluationReport rep = rosd::evaluate(d, state, before_cfg);
    std::optional<rosd::DetectionReport> det;
    if (a.threshold) det = rosd::detect(d, state, *a.threshold);

    std::cout << rosd::render_report(rep, det ? &*det : nullptr);
    if (!a.output.empty()) {
        const json j = rosd::report_to_json(rep, det ? &*det : nullptr);
        std::ofstream out(a.output, std::ios::binary | std::ios::trunc);
        if (!out) throw rosd::IoError("cannot open for writing: " + a.output);
        out << j.dump(2) << '\n';
        if (!out) throw rosd::IoError("write failed: " + a.output);
        write_manifest(a.output, command_line,
                       std::nullopt, "threshold=" + (a.threshold ? rosd::format_double(*a.threshold) : "none"),
                       {a.output});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"review spam scoring: simulate, detect, inject, evaluate"};
    app.set_version_flag("--version", rosd::kVersion);
    app.require_subcommand(1);
    const std::string command_line = join_args(argc, argv);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "generate a labeled review dataset");
    simulate->add_option("-c,--config", sim.config_path, "scenario config (json)");
    simulate->add_option("--preset", sim.preset, "built-in scenario name");
    simulate->add_option("--dump-preset", sim.dump_preset, "print a preset config and exit");
    simulate->add_option("-o,--output", sim.output, "dataset output path");
    simulate->add_option("--format", sim.format, "csv or jsonl (default: by extension)");
    std::uint64_t sim_seed = 0;
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "RNG seed override");

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "score a dataset (trust/honesty/reliability)");
    detect->add_option("-i,--input", det.input, "dataset path")->required();
    detect->add_option("-o,--output", det.output, "scores output path")->required();
    detect->add_option("--tolerance", det.tolerance, "convergence threshold");
    detect->add_option("--max-iters", det.max_iters, "iteration cap");
    detect->add_option("--initial", det.initial, "uniform initial score value");
    detect->add_option("--input-format", det.in_format, "csv or jsonl");
    detect->add_option("--format", det.out_format, "csv or jsonl (default: by extension)");

    InjectArgs inj;
    auto* inject = app.add_subcommand("inject", "add a scripted attacker to a dataset");
    inject->add_option("-i,--input", inj.input, "dataset path")->required();
    inject->add_option("-o,--output", inj.output, "dataset output path")->required();
    inject->add_option("--preset", inj.preset, "inject-slander or inject-promote");
    inject->add_option("--kind", inj.kind, "simple, over_product, over_time");
    inject->add_option("--targets", inj.targets, "target product ids")->delimiter(',');
    inject->add_option("--score", inj.score, "attack score");
    inject->add_option("-n,--n-reviews", inj.n_reviews, "number of injected reviews");
    inject->add_flag("--honest-elsewhere,!--no-honest-elsewhere", inj.honest_elsewhere,
                     "blend in with honest scores on non-targets");
    inject->add_option("--attacker-id", inj.attacker_id, "reviewer id for the attacker");
    std::uint64_t inj_seed = 0;
    auto* inj_seed_opt = inject->add_option("--seed", inj_seed, "RNG seed");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "benchmark a scored, labeled dataset");
    evaluate->add_option("-i,--input", ev.dataset, "dataset path")->required();
    evaluate->add_option("-s,--scores", ev.scores, "scores path (from detect)")->required();
    evaluate->add_option("-o,--output", ev.output, "json report path");
    double threshold = 0.5;
    auto* thr_opt = evaluate->add_option("--threshold", threshold, "detection threshold");

    try {
        app.parse(argc, argv);
        if (*sim_seed_opt) sim.seed = sim_seed;
        if (*inj_seed_opt) inj.seed = inj_seed;
        if (*thr_opt) ev.threshold = threshold;
        if (simulate->parsed()) return cmd_simulate(sim, command_line);
        if (detect->parsed()) return cmd_detect(det, command_line);
        if (inject->parsed()) return cmd_inject(inj, command_line);
        if (evaluate->parsed()) return cmd_evaluate(ev, command_line);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const rosd::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const rosd::IntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const rosd::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const rosd::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
