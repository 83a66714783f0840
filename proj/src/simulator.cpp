#include "rosd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace rosd {

namespace {

using nlohmann::json;

double clamp_score(double v) {
    return std::min(kMaxRawScore, std::max(0.0, v));
}

std::string padded_id(const char* prefix, int i, std::size_t width) {
    std::string n = std::to_string(i);
    if (n.size() < width) n.insert(0, width - n.size(), '0');
    return prefix + n;
}

void validate_script(const AttackScript& s, const std::set<std::string>& product_ids) {
    if (s.target_products.empty()) throw ConfigError("attack script has no target products");
    for (const auto& t : s.target_products)
        if (!product_ids.count(t)) throw ConfigError("attack target not found: " + t);
    if (!(s.attack_score >= 0.0 && s.attack_score <= kMaxRawScore))
        throw ConfigError("attack_score out of range [0,5]");
    if (s.kind == AttackKind::over_time && s.block_length < 1)
        throw ConfigError("block_length must be >= 1");
}

struct Connection {
    std::size_t reviewer;  // index into the emitted reviewer list
    std::string product_id;
};

}  // namespace

AttackKind attack_kind_from_name(const std::string& name) {
    if (name == "simple") return AttackKind::simple;
    if (name == "over_product") return AttackKind::over_product;
    if (name == "over_time") return AttackKind::over_time;
    throw ConfigError("unknown attack kind: '" + name + "'");
}

const char* attack_kind_name(AttackKind kind) {
    switch (kind) {
        case AttackKind::simple: return "simple";
        case AttackKind::over_product: return "over_product";
        case AttackKind::over_time: return "over_time";
    }
    return "?";
}

double gen_honest_score(double quality, const HonestPolicy& policy, SeededRng& rng) {
    if (!(quality >= 0.0 && quality <= kMaxRawScore))
        throw ConfigError("quality out of range [0,5]");
    if (policy.variance < 0.0) throw ConfigError("variance must be >= 0");
    const double draw = quality + std::sqrt(policy.variance) * rng.normal();
    return clamp_score(draw);
}

Dataset run_scenario(const ScenarioConfig& cfg) {
    if (cfg.total_reviews < 1) throw ConfigError("total_reviews must be >= 1");
    if (cfg.products.empty()) throw ConfigError("scenario has no products");
    if (cfg.honest_policy.variance < 0.0) throw ConfigError("variance must be >= 0");

    std::set<std::string> product_ids;
    for (const Product& p : cfg.products) {
        if (!p.true_quality) throw ConfigError("product " + p.id + " has no quality");
        if (!(*p.true_quality >= 0.0 && *p.true_quality <= kMaxRawScore))
            throw ConfigError("product " + p.id + " quality out of range [0,5]");
        if (!product_ids.insert(p.id).second) throw ConfigError("duplicate product id: " + p.id);
    }

    // Honest reviewer ids: generated, or the connection map's keys.
    std::vector<std::string> honest_ids;
    std::map<std::string, std::vector<std::string>> connections = cfg.connections;
    if (connections.empty()) {
        if (cfg.honest_count < 0) throw ConfigError("honest count must be >= 0");
        std::size_t width = std::max<std::size_t>(2, std::to_string(cfg.honest_count).size());
        for (int i = 1; i <= cfg.honest_count; ++i) {
            honest_ids.push_back(padded_id("r", i, width));
            auto& prods = connections[honest_ids.back()];
            for (const Product& p : cfg.products) prods.push_back(p.id);
        }
    } else {
        if (cfg.honest_count != 0 &&
            static_cast<std::size_t>(cfg.honest_count) != connections.size())
            throw ConfigError("honest count does not match the connection map");
        for (const auto& [rid, prods] : connections) {
            honest_ids.push_back(rid);
            if (prods.empty()) throw ConfigError("reviewer " + rid + " has no connections");
            for (const auto& pid : prods)
                if (!product_ids.count(pid))
                    throw ConfigError("connection references unknown product: " + pid);
        }
    }

    std::unordered_set<std::string> reviewer_ids(honest_ids.begin(), honest_ids.end());
    if (reviewer_ids.size() != honest_ids.size())
        throw ConfigError("duplicate honest reviewer id");
    for (const SpammerSpec& s : cfg.spammers) {
        if (!reviewer_ids.insert(s.id).second) throw ConfigError("duplicate reviewer id: " + s.id);
        validate_script(s.script, product_ids);
    }

    // Emission plan: honest reviewers first, then spammers; each reviewer's
    // products in declared order; round-robin over the flattened list.
    struct Emitter {
        std::string id;
        bool spammer;
        const AttackScript* script;
    };
    std::vector<Emitter> emitters;
    std::vector<Connection> plan;
    for (const std::string& rid : honest_ids) {
        emitters.push_back({rid, false, nullptr});
        for (const auto& pid : connections[rid]) plan.push_back({emitters.size() - 1, pid});
    }
    for (const SpammerSpec& s : cfg.spammers) {
        emitters.push_back({s.id, true, &s.script});
        const AttackScript& sc = s.script;
        std::vector<std::string> prods(sc.target_products.begin(), sc.target_products.end());
        if (sc.kind == AttackKind::over_product && sc.honest_elsewhere) {
            // Connected to everything, targets included, in declared order.
            prods.clear();
            for (const Product& p : cfg.products) prods.push_back(p.id);
        }
        for (const auto& pid : prods) plan.push_back({emitters.size() - 1, pid});
    }
    if (plan.empty()) throw ConfigError("scenario has no reviewer-product connections");

    std::unordered_map<std::string, double> quality;
    for (const Product& p : cfg.products) quality[p.id] = *p.true_quality;

    DatasetBuilder b;
    for (const Product& p : cfg.products) b.add_product(p);
    for (const Emitter& e : emitters) b.add_reviewer(Reviewer{e.id, e.spammer});

    SeededRng rng(cfg.seed);
    std::vector<int> seq_count(emitters.size(), 0);
    for (int emitted = 0; emitted < cfg.total_reviews; ++emitted) {
        const Connection& c = plan[static_cast<std::size_t>(emitted) % plan.size()];
        const Emitter& e = emitters[c.reviewer];
        Review v;
        v.reviewer_id = e.id;
        v.product_id = c.product_id;
        v.seq = ++seq_count[c.reviewer];
        if (!e.spammer) {
            v.score = gen_honest_score(quality[c.product_id], cfg.honest_policy, rng);
            v.is_spam = false;
        } else {
            const AttackScript& sc = *e.script;
            bool is_target = std::find(sc.target_products.begin(), sc.target_products.end(),
                                       c.product_id) != sc.target_products.end();
            switch (sc.kind) {
                case AttackKind::simple:
                    v.score = sc.attack_score;
                    v.is_spam = true;
                    break;
                case AttackKind::over_product:
                    if (is_target) {
                        v.score = sc.attack_score;
                        v.is_spam = true;
                    } else {
                        v.score = gen_honest_score(quality[c.product_id], cfg.honest_policy, rng);
                        v.is_spam = false;
                    }
                    break;
                case AttackKind::over_time: {
                    // Blocks of block_length reviews along the spammer's own
                    // stream: block 1 honest, block 2 attack, alternating.
                    const int block = (v.seq + sc.block_length - 1) / sc.block_length;
                    if (block % 2 == 0) {
                        v.score = sc.attack_score;
                        v.is_spam = true;
                    } else {
                        v.score = quality[c.product_id];  // true score, no noise
                        v.is_spam = false;
                    }
                    break;
                }
            }
        }
        b.add_review(std::move(v));
    }
    return b.build();
}

std::vector<std::string> pick_injection_targets(const Dataset& d, bool high_scored, int max_n) {
    struct Cand {
        std::string id;
        std::size_t reviews;
        double mean;
    };
    std::vector<Cand> cands;
    for (std::size_t i : d.products_by_id()) {
        auto adj = d.reviews_of_product(i);
        if (adj.empty()) continue;
        double sum = 0.0;
        for (std::size_t vi : adj) sum += d.reviews()[vi].score;
        const double mean = sum / static_cast<double>(adj.size());
        if (high_scored ? mean >= 3.5 : mean <= 2.0)
            cands.push_back({d.products()[i].id, adj.size(), mean});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(b.reviews, a.id) < std::tie(a.reviews, b.id);  // count desc, id asc
    });
    std::vector<std::string> out;
    for (const Cand& c : cands) {
        if (static_cast<int>(out.size()) >= max_n) break;
        out.push_back(c.id);
    }
    return out;
}

Dataset inject_attacker(const Dataset& d, const AttackScript& script, int n_reviews,
                        SeededRng& rng, std::string attacker_id) {
    if (n_reviews < 0) throw ConfigError("n_reviews must be >= 0");
    if (script.target_products.empty()) throw IntegrityError("attack script has no targets");
    for (const auto& t : script.target_products)
        if (!d.has_product(t)) throw IntegrityError("attack target not found: " + t);

    if (attacker_id.empty()) {
        attacker_id = "attacker";
        for (int i = 2; d.has_reviewer(attacker_id); ++i)
            attacker_id = "attacker" + std::to_string(i);
    } else if (d.has_reviewer(attacker_id)) {
        throw IntegrityError("attacker id already exists: " + attacker_id);
    }

    // Current mean raw score per product, for "correct-looking" filler reviews.
    std::unordered_map<std::string, double> mean_score;
    for (std::size_t i = 0; i < d.num_products(); ++i) {
        auto adj = d.reviews_of_product(i);
        double sum = 0.0;
        for (std::size_t vi : adj) sum += d.reviews()[vi].score;
        mean_score[d.products()[i].id] =
            adj.empty() ? kMaxRawScore / 2.0 : sum / static_cast<double>(adj.size());
    }

    std::unordered_set<std::string> target_set(script.target_products.begin(),
                                               script.target_products.end());
    std::vector<std::string> fillers;  // non-targets, most reviewed first
    if (script.kind == AttackKind::over_product && script.honest_elsewhere) {
        struct Cand {
            std::string id;
            std::size_t reviews;
        };
        std::vector<Cand> cands;
        for (std::size_t i : d.products_by_id())
            if (!target_set.count(d.products()[i].id))
                cands.push_back({d.products()[i].id, d.reviews_of_product(i).size()});
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            return std::tie(b.reviews, a.id) < std::tie(a.reviews, b.id);
        });
        for (const Cand& c : cands) fillers.push_back(c.id);
    }

    DatasetBuilder b;
    for (const Product& p : d.products()) b.add_product(p);
    for (const Reviewer& r : d.reviewers()) b.add_reviewer(r);
    b.add_reviewer(Reviewer{attacker_id, true});
    for (const Review& v : d.reviews()) b.add_review(v);

    const HonestPolicy filler_policy{0.5};
    std::size_t t_cursor = 0, f_cursor = 0;
    for (int k = 1; k <= n_reviews; ++k) {
        Review v;
        v.reviewer_id = attacker_id;
        v.seq = k;
        // Odd positions attack, even positions blend in (when there is
        // anywhere to blend in to).
        const bool attack = fillers.empty() || (k % 2 == 1);
        if (attack) {
            v.product_id = script.target_products[t_cursor++ % script.target_products.size()];
            v.score = script.attack_score;
            v.is_spam = true;
        } else {
            v.product_id = fillers[f_cursor++ % fillers.size()];
            v.score = clamp_score(mean_score[v.product_id] +
                                  std::sqrt(filler_policy.variance) * rng.normal());
            v.is_spam = false;
        }
        b.add_review(std::move(v));
    }
    return b.build();
}

// --- config files -----------------------------------------------------------

namespace {

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config missing '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

template <typename T>
T optional_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario config must be a json object");
    if (require<int>(j, "schema_version") != 1)
        throw ConfigError("unsupported schema_version (expected 1)");
    ScenarioConfig cfg;
    cfg.seed = optional_or<std::uint64_t>(j, "seed", 1);
    cfg.total_reviews = require<int>(j, "total_reviews");
    for (const json& pj : require<json>(j, "products")) {
        Product p;
        p.id = require<std::string>(pj, "id");
        p.true_quality = require<double>(pj, "quality");
        cfg.products.push_back(std::move(p));
    }
    const json hj = require<json>(j, "honest");
    cfg.honest_count = require<int>(hj, "count");
    cfg.honest_policy.variance = optional_or<double>(hj, "variance", 0.5);
    if (hj.contains("connections") && hj.at("connections").is_object()) {
        for (auto& [rid, prods] : hj.at("connections").items()) {
            try {
                cfg.connections[rid] = prods.get<std::vector<std::string>>();
            } catch (const json::exception& e) {
                throw ConfigError(std::string("connections for ") + rid + ": " + e.what());
            }
        }
    }
    for (const json& sj : optional_or<json>(j, "spammers", json::array())) {
        SpammerSpec s;
        s.id = require<std::string>(sj, "id");
        s.script.kind = attack_kind_from_name(require<std::string>(sj, "kind"));
        s.script.target_products = require<std::vector<std::string>>(sj, "targets");
        s.script.attack_score = require<double>(sj, "attack_score");
        s.script.honest_elsewhere = optional_or<bool>(sj, "honest_elsewhere", false);
        s.script.block_length = optional_or<int>(sj, "block_length", 20);
        cfg.spammers.push_back(std::move(s));
    }
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["schema_version"] = 1;
    j["seed"] = cfg.seed;
    j["total_reviews"] = cfg.total_reviews;
    j["products"] = json::array();
    for (const Product& p : cfg.products)
        j["products"].push_back({{"id", p.id}, {"quality", p.true_quality.value_or(0.0)}});
    j["honest"] = {{"count", cfg.honest_count}, {"variance", cfg.honest_policy.variance}};
    if (!cfg.connections.empty()) {
        json c = json::object();
        for (const auto& [rid, prods] : cfg.connections) c[rid] = prods;
        j["honest"]["connections"] = c;
    } else {
        j["honest"]["connections"] = "all";
    }
    j["spammers"] = json::array();
    for (const SpammerSpec& s : cfg.spammers) {
        json sj{{"id", s.id},
                {"kind", attack_kind_name(s.script.kind)},
                {"targets", s.script.target_products},
                {"attack_score", s.script.attack_score},
                {"honest_elsewhere", s.script.honest_elsewhere}};
        if (s.script.kind == AttackKind::over_time) sj["block_length"] = s.script.block_length;
        j["spammers"].push_back(std::move(sj));
    }
    return j;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << scenario_to_json(cfg).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

// --- presets ----------------------------------------------------------------

namespace {

ScenarioConfig base_scenario(int honest, double target_quality) {
    ScenarioConfig cfg;
    cfg.products = {Product{"p01", 3.0}, Product{"p02", 3.0}, Product{"p03", target_quality}};
    cfg.honest_count = honest;
    cfg.total_reviews = 1000;
    cfg.seed = 1;
    return cfg;
}

// Repeated connections raise a reviewer's emission rate relative to the
// spammer. The over-time studies ran with a low-volume attacker (about 40 of
// the 1000 reviews); weight 4 reproduces that ratio with 2 honest reviewers.
void repeat_connections(ScenarioConfig& cfg, int per_product) {
    std::size_t width = std::max<std::size_t>(2, std::to_string(cfg.honest_count).size());
    for (int i = 1; i <= cfg.honest_count; ++i) {
        auto& prods = cfg.connections[padded_id("r", i, width)];
        for (int round = 0; round < per_product; ++round)
            for (const Product& p : cfg.products) prods.push_back(p.id);
    }
}

SpammerSpec spammer(AttackKind kind, double attack_score, bool honest_elsewhere) {
    SpammerSpec s;
    s.id = "s01";
    s.script.kind = kind;
    s.script.target_products = {"p03"};
    s.script.attack_score = attack_score;
    s.script.honest_elsewhere = honest_elsewhere;
    s.script.block_length = 20;
    return s;
}

}  // namespace

const std::vector<std::string>& scenario_preset_names() {
    static const std::vector<std::string> names = {
        "scenario1-slander", "scenario1-promote", "scenario2-slander",
        "scenario2-promote", "scenario3-slander", "scenario3-promote",
    };
    return names;
}

ScenarioConfig scenario_preset(const std::string& name) {
    // Slander variants attack a quality-3 product with low scores; promote
    // variants push a poor product (quality 1) with 5s. The over-time attacks
    // run against quality-3 products in both variants.
    if (name == "scenario1-slander") {
        auto cfg = base_scenario(9, 3.0);
        cfg.spammers = {spammer(AttackKind::simple, 0.0, false)};
        return cfg;
    }
    if (name == "scenario1-promote") {
        auto cfg = base_scenario(9, 1.0);
        cfg.spammers = {spammer(AttackKind::simple, 5.0, false)};
        return cfg;
    }
    if (name == "scenario2-slander") {
        auto cfg = base_scenario(9, 3.0);
        cfg.spammers = {spammer(AttackKind::over_product, 0.0, true)};
        return cfg;
    }
    if (name == "scenario2-promote") {
        auto cfg = base_scenario(9, 1.0);
        cfg.spammers = {spammer(AttackKind::over_product, 5.0, true)};
        return cfg;
    }
    if (name == "scenario3-slander") {
        auto cfg = base_scenario(2, 3.0);
        repeat_connections(cfg, 4);
        cfg.spammers = {spammer(AttackKind::over_time, 1.0, false)};
        return cfg;
    }
    if (name == "scenario3-promote") {
        auto cfg = base_scenario(2, 3.0);
        repeat_connections(cfg, 4);
        cfg.spammers = {spammer(AttackKind::over_time, 5.0, false)};
        return cfg;
    }
    throw ConfigError("unknown preset: '" + name + "'");
}

}  // namespace rosd
