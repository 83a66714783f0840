#include <doctest.h>

#include <cmath>

#include "rosd/dataset_io.hpp"
#include "rosd/simulator.hpp"
#include "testutil.hpp"

using namespace rosd;
using rosd::testing::TempDir;
using rosd::testing::read_file;

TEST_CASE("gen_honest_score") {
    SUBCASE("degenerate variance returns the quality exactly") {
        SeededRng rng(1);
        HonestPolicy p{0.0};
        for (int i = 0; i < 10; ++i) CHECK(gen_honest_score(3.0, p, rng) == 3.0);
    }
    SUBCASE("sample mean sits on the quality") {
        SeededRng rng(2);
        HonestPolicy p{0.5};
        double sum = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) sum += gen_honest_score(3.0, p, rng);
        CHECK(std::fabs(sum / n - 3.0) < 0.05);
    }
    SUBCASE("draws clamp to the raw scale") {
        SeededRng rng(3);
        HonestPolicy p{0.5};
        for (int i = 0; i < 5000; ++i) {
            const double s = gen_honest_score(5.0, p, rng);
            CHECK(s <= 5.0);
            CHECK(s >= 0.0);
        }
    }
    SUBCASE("bad inputs are rejected") {
        SeededRng rng(4);
        CHECK_THROWS_AS(gen_honest_score(6.0, HonestPolicy{0.5}, rng), ConfigError);
        CHECK_THROWS_AS(gen_honest_score(3.0, HonestPolicy{-1.0}, rng), ConfigError);
    }
}

TEST_CASE("scenario runs are deterministic byte for byte") {
    TempDir dir("sim");
    ScenarioConfig cfg = scenario_preset("scenario2-slander");
    cfg.seed = 99;
    save_dataset(run_scenario(cfg), dir / "a.jsonl");
    save_dataset(run_scenario(cfg), dir / "b.jsonl");
    CHECK(read_file(dir / "a.jsonl") == read_file(dir / "b.jsonl"));
    cfg.seed = 100;
    save_dataset(run_scenario(cfg), dir / "c.jsonl");
    CHECK(read_file(dir / "a.jsonl") != read_file(dir / "c.jsonl"));
}

TEST_CASE("scenario1 preset: a pure slander attacker on one product") {
    ScenarioConfig cfg = scenario_preset("scenario1-slander");
    cfg.seed = 7;
    Dataset d = run_scenario(cfg);
    CHECK(d.num_reviews() == 1000);
    CHECK(d.num_reviewers() == 10);
    CHECK(d.num_products() == 3);
    CHECK(d.reviewers()[d.reviewer_index("s01")].is_spammer == true);
    std::size_t spam = 0;
    for (std::size_t vi : d.reviews_of_reviewer(d.reviewer_index("s01"))) {
        const Review& v = d.reviews()[vi];
        CHECK(v.product_id == "p03");
        CHECK(v.score == 0.0);
        CHECK(v.is_spam == true);
        ++spam;
    }
    CHECK(spam > 0);
    for (std::size_t i = 0; i < d.num_reviewers(); ++i) {
        if (d.reviewers()[i].id == "s01") continue;
        CHECK(d.reviewers()[i].is_spammer == false);
        for (std::size_t vi : d.reviews_of_reviewer(i)) CHECK(d.reviews()[vi].is_spam == false);
    }
}

TEST_CASE("scenario3 preset: alternating 20-review blocks of truth and attack") {
    ScenarioConfig cfg = scenario_preset("scenario3-slander");
    cfg.seed = 7;
    Dataset d = run_scenario(cfg);
    auto spam_rows = d.reviews_of_reviewer(d.reviewer_index("s01"));
    REQUIRE(spam_rows.size() >= 40);
    for (std::size_t vi : spam_rows) {
        const Review& v = d.reviews()[vi];
        CHECK(v.product_id == "p03");
        const bool attack_block = ((v.seq + 19) / 20) % 2 == 0;
        if (attack_block) {
            CHECK(v.score == 1.0);
            CHECK(v.is_spam == true);
        } else {
            CHECK(v.score == 3.0);  // exact true quality, no noise
            CHECK(v.is_spam == false);
        }
    }
}

TEST_CASE("zero spammers with zero variance reproduce the qualities exactly") {
    ScenarioConfig cfg;
    cfg.products = {Product{"p1", 2.0}, Product{"p2", 4.5}};
    cfg.honest_count = 3;
    cfg.honest_policy.variance = 0.0;
    cfg.total_reviews = 60;
    Dataset d = run_scenario(cfg);
    CHECK(d.num_reviews() == 60);
    for (const Review& v : d.reviews()) {
        CHECK(v.score == *d.products()[d.product_index(v.product_id)].true_quality);
        CHECK(v.is_spam == false);
    }
}

TEST_CASE("over_product spammers are labeled spam exactly on targets") {
    ScenarioConfig cfg = scenario_preset("scenario2-promote");
    cfg.seed = 13;
    Dataset d = run_scenario(cfg);
    for (std::size_t vi : d.reviews_of_reviewer(d.reviewer_index("s01"))) {
        const Review& v = d.reviews()[vi];
        if (v.product_id == "p03") {
            CHECK(v.is_spam == true);
            CHECK(v.score == 5.0);
        } else {
            CHECK(v.is_spam == false);  // honest filler by a labeled spammer
        }
    }
}

TEST_CASE("scenario config round-trips through json") {
    for (const std::string& name : scenario_preset_names()) {
        ScenarioConfig cfg = scenario_preset(name);
        ScenarioConfig back = scenario_from_json(scenario_to_json(cfg));
        CHECK(run_scenario(cfg) == run_scenario(back));
    }
}

TEST_CASE("scenario validation") {
    ScenarioConfig cfg = scenario_preset("scenario1-slander");
    SUBCASE("unknown target") {
        cfg.spammers[0].script.target_products = {"p99"};
        CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
    }
    SUBCASE("empty target set") {
        cfg.spammers[0].script.target_products.clear();
        CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
    }
    SUBCASE("duplicate reviewer id") {
        cfg.spammers.push_back(cfg.spammers[0]);
        CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
    }
    SUBCASE("bad block length") {
        cfg.spammers[0].script.kind = AttackKind::over_time;
        cfg.spammers[0].script.block_length = 0;
        CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
    }
    SUBCASE("missing quality") {
        cfg.products[0].true_quality.reset();
        CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
    }
    SUBCASE("zero reviews") {
        cfg.total_reviews = 0;
        CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
    }
}

TEST_CASE("inject_attacker appends without touching existing rows") {
    ScenarioConfig base = scenario_preset("scenario1-slander");
    base.spammers.clear();
    base.seed = 5;
    Dataset d = run_scenario(base);

    AttackScript script;
    script.kind = AttackKind::over_product;
    script.attack_score = 0.5;
    script.honest_elsewhere = true;
    script.target_products = {"p01"};

    SeededRng rng(17);
    Dataset out = inject_attacker(d, script, 20, rng);
    CHECK(out.num_reviews() == d.num_reviews() + 20);
    CHECK(out.num_reviewers() == d.num_reviewers() + 1);
    for (std::size_t i = 0; i < d.num_reviews(); ++i) {
        const Review &a = d.reviews()[i], &b = out.reviews()[i];
        CHECK(a.reviewer_id == b.reviewer_id);
        CHECK(a.score == b.score);
        CHECK(a.seq == b.seq);
        CHECK(a.is_spam == b.is_spam);
    }
    // alternation: odd seq hits the target with the attack score
    const Reviewer& attacker = out.reviewers().back();
    CHECK(attacker.is_spammer == true);
    for (std::size_t vi : out.reviews_of_reviewer(out.reviewer_index(attacker.id))) {
        const Review& v = out.reviews()[vi];
        if (v.seq % 2 == 1) {
            CHECK(v.product_id == "p01");
            CHECK(v.score == 0.5);
            CHECK(v.is_spam == true);
        } else {
            CHECK(v.product_id != "p01");
            CHECK(v.is_spam == false);
        }
    }
}

TEST_CASE("inject_attacker with zero reviews only adds the empty reviewer") {
    ScenarioConfig base = scenario_preset("scenario1-slander");
    base.spammers.clear();
    Dataset d = run_scenario(base);
    AttackScript script;
    script.target_products = {"p01"};
    SeededRng rng(1);
    Dataset out = inject_attacker(d, script, 0, rng, "ghost");
    CHECK(out.num_reviews() == d.num_reviews());
    CHECK(out.num_reviewers() == d.num_reviewers() + 1);
    CHECK(out.reviews_of_reviewer(out.reviewer_index("ghost")).empty());
}

TEST_CASE("inject_attacker rejects unknown targets") {
    Dataset d = rosd::testing::random_dataset(3, 20);
    AttackScript script;
    script.target_products = {"missing"};
    SeededRng rng(1);
    CHECK_THROWS_AS(inject_attacker(d, script, 5, rng), IntegrityError);
}

TEST_CASE("pick_injection_targets separates high and low scored products") {
    DatasetBuilder b;
    for (int i = 0; i < 3; ++i) {
        b.add_review(Review{"r1", "high" + std::to_string(i), 4.5, 0, {}});
        b.add_review(Review{"r1", "low" + std::to_string(i), 1.0, 0, {}});
        b.add_review(Review{"r1", "mid" + std::to_string(i), 3.0, 0, {}});
    }
    Dataset d = b.build();
    for (const std::string& t : pick_injection_targets(d, true, 10))
        CHECK(t.substr(0, 4) == "high");
    for (const std::string& t : pick_injection_targets(d, false, 10))
        CHECK(t.substr(0, 3) == "low");
    CHECK(pick_injection_targets(d, true, 2).size() == 2);
}
