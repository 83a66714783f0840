#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rosd/dataset.hpp"
#include "rosd/rng.hpp"

namespace rosd {

/// Honest reviewers score Normal(true quality, variance) on the raw 0..5
/// scale, clamped. Variance, not standard deviation.
struct HonestPolicy {
    double variance = 0.5;
};

enum class AttackKind {
    simple,        // every emitted review hits a target with attack_score
    over_product,  // attack_score on targets, honest scores elsewhere
    over_time,     // alternating blocks: true quality, then attack_score
};

AttackKind attack_kind_from_name(const std::string& name);
const char* attack_kind_name(AttackKind kind);

struct AttackScript {
    AttackKind kind = AttackKind::simple;
    std::vector<std::string> target_products;
    double attack_score = 0.0;
    bool honest_elsewhere = false;  // over_product: also review non-targets honestly
    int block_length = 20;          // over_time: reviews per block
};

struct SpammerSpec {
    std::string id;
    AttackScript script;
};

/// Declarative scenario: products with ground-truth quality, an honest
/// population, scripted spammers, and a seed. Reviews are emitted by cycling
/// the reviewer-product connection list round-robin, which pins seq
/// assignment and makes runs reproducible.
struct ScenarioConfig {
    std::vector<Product> products;  // true_quality required
    int honest_count = 0;
    HonestPolicy honest_policy;
    /// Empty: every honest reviewer (generated ids r01..rNN) connects to every
    /// product. Otherwise keys are the honest reviewer ids.
    std::map<std::string, std::vector<std::string>> connections;
    std::vector<SpammerSpec> spammers;
    int total_reviews = 1000;
    std::uint64_t seed = 1;
};

/// Draw one honest score: Normal(quality, sqrt(variance)) clamped to [0,5].
double gen_honest_score(double quality, const HonestPolicy& policy, SeededRng& rng);

/// Run the scenario: exactly total_reviews reviews, ground-truth labels on
/// every review and reviewer, deterministic for a given (cfg, seed).
Dataset run_scenario(const ScenarioConfig& cfg);

/// Add one scripted attacker with n_reviews reviews to an existing dataset.
/// Targets get attack_score (labeled spam); with honest_elsewhere the
/// attacker alternates target/non-target, scoring non-targets near their
/// current mean raw score (labeled non-spam). Pre-existing reviews are
/// neither mutated nor reordered. attacker_id empty = pick a fresh id.
Dataset inject_attacker(const Dataset& d, const AttackScript& script, int n_reviews,
                        SeededRng& rng, std::string attacker_id = "");

/// Products suitable as injection targets: mean raw score >= 3.5 (slander
/// target selection) or <= 2.0 (promote), at most max_n, most-reviewed first.
std::vector<std::string> pick_injection_targets(const Dataset& d, bool high_scored, int max_n);

// Scenario config file schema (schema_version 1).
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path);

/// Built-in configs reproducing the shipped attack studies:
/// scenario{1,2,3}-{slander,promote}.
const std::vector<std::string>& scenario_preset_names();
ScenarioConfig scenario_preset(const std::string& name);

}  // namespace rosd
