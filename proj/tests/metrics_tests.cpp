#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rosd/metrics.hpp"
#include "rosd/simulator.hpp"
#include "testutil.hpp"

using namespace rosd;

namespace {

std::pair<Dataset, ScoreState> scored_preset(const std::string& name, std::uint64_t seed) {
    ScenarioConfig cfg = scenario_preset(name);
    cfg.seed = seed;
    Dataset d = run_scenario(cfg);
    return {d, solve(d).state};
}

}  // namespace

TEST_CASE("scenario1 evaluation: pure attacker ends with zero trust and honesty") {
    auto [d, state] = scored_preset("scenario1-slander", 7);
    EvaluationReport rep = evaluate(d, state);
    CHECK(rep.avg_trust_spammer == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.avg_honesty_spam == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rep.avg_trust_honest > rep.avg_trust_spammer);
    CHECK(rep.target_products == std::vector<std::string>{"p03"});
    CHECK(rep.deviation <= 0.02);
}

TEST_CASE("a dataset without spam degenerates to equal before/after") {
    ScenarioConfig cfg = scenario_preset("scenario1-slander");
    cfg.spammers.clear();
    Dataset d = run_scenario(cfg);
    ScoreState state = solve(d).state;
    EvaluationReport rep = evaluate(d, state);
    CHECK(rep.deviation == 0.0);
    CHECK(rep.reliability_before == rep.reliability_after);
    CHECK(std::isnan(rep.avg_trust_spammer));
    CHECK(std::isnan(rep.avg_honesty_spam));
    // json renders the empty groups as null, text as "-"
    auto j = report_to_json(rep);
    CHECK(j["avg_trust_spammer"].is_null());
    CHECK(render_report(rep).find('-') != std::string::npos);
}

TEST_CASE("scenario2 evaluation: deceptive attacker lands between spam and honest levels") {
    auto [d, state] = scored_preset("scenario2-slander", 7);
    EvaluationReport rep = evaluate(d, state);
    CHECK(rep.avg_trust_spammer > rep.avg_honesty_spam);
    CHECK(rep.avg_trust_spammer < rep.avg_trust_honest);
}

TEST_CASE("evaluate requires ground-truth labels") {
    DatasetBuilder b;
    b.add_review(Review{"r1", "p1", 4.0, 0, {}});
    Dataset d = b.build();
    ScoreState state = solve(d).state;
    CHECK_THROWS_AS(evaluate(d, state), ConfigError);
}

TEST_CASE("evaluate is invariant under storage order") {
    auto [d, state] = scored_preset("scenario2-slander", 3);
    DatasetBuilder b;
    for (auto it = d.products().rbegin(); it != d.products().rend(); ++it) b.add_product(*it);
    for (auto it = d.reviewers().rbegin(); it != d.reviewers().rend(); ++it) b.add_reviewer(*it);
    std::vector<Review> rev(d.reviews());
    std::reverse(rev.begin(), rev.end());
    for (const Review& v : rev) b.add_review(v);
    Dataset d2 = b.build();
    ScoreState state2 = solve(d2).state;

    EvaluationReport a = evaluate(d, state);
    EvaluationReport b2 = evaluate(d2, state2);
    CHECK(a.avg_trust_honest == b2.avg_trust_honest);
    CHECK(a.avg_trust_spammer == b2.avg_trust_spammer);
    CHECK(a.avg_honesty_nonspam == b2.avg_honesty_nonspam);
    CHECK(a.avg_honesty_spam == b2.avg_honesty_spam);
    CHECK(a.reliability_before == b2.reliability_before);
    CHECK(a.reliability_after == b2.reliability_after);
    CHECK(a.deviation == b2.deviation);
}

TEST_CASE("strip_spam_reviews compacts the surviving seq values") {
    DatasetBuilder b;
    b.add_review(Review{"r1", "p1", 3.0, 1, false});
    b.add_review(Review{"r1", "p2", 0.0, 2, true});
    b.add_review(Review{"r1", "p1", 4.0, 3, false});
    Dataset d = b.build();
    Dataset clean = strip_spam_reviews(d);
    CHECK(clean.num_reviews() == 2);
    CHECK(clean.num_reviewers() == 1);
    CHECK(clean.num_products() == 2);  // products stay even when spam-only
    CHECK(clean.reviews()[0].seq == 1);
    CHECK(clean.reviews()[1].seq == 2);
    CHECK(clean.reviews()[1].score == 4.0);
}

TEST_CASE("detect thresholds") {
    auto [d, state] = scored_preset("scenario1-slander", 7);
    SUBCASE("0.5 catches every spam review") {
        DetectionReport rep = detect(d, state, 0.5);
        CHECK(rep.review_recall == 1.0);
        CHECK(rep.reviewer_recall == 1.0);
        CHECK(rep.review_precision > 0.0);
    }
    SUBCASE("0 flags nothing") {
        DetectionReport rep = detect(d, state, 0.0);
        CHECK(rep.review_precision == 1.0);
        CHECK(rep.review_recall == 0.0);
        CHECK(rep.reviewer_recall == 0.0);
    }
    SUBCASE("1 catches everything") {
        DetectionReport rep = detect(d, state, 1.0);
        CHECK(rep.review_recall == 1.0);
        CHECK(rep.reviewer_recall == 1.0);
    }
    SUBCASE("recall grows with the threshold") {
        double prev_review = -1.0, prev_reviewer = -1.0;
        for (double t : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
            DetectionReport rep = detect(d, state, t);
            CHECK(rep.review_recall >= prev_review);
            CHECK(rep.reviewer_recall >= prev_reviewer);
            prev_review = rep.review_recall;
            prev_reviewer = rep.reviewer_recall;
        }
    }
}

TEST_CASE("report serialization carries the detection block when present") {
    auto [d, state] = scored_preset("scenario1-slander", 7);
    EvaluationReport rep = evaluate(d, state);
    DetectionReport det = detect(d, state, 0.5);
    auto j = report_to_json(rep, &det);
    CHECK(j.contains("detection"));
    CHECK(j["detection"]["review_recall"] == 1.0);
    auto text = render_report(rep, &det);
    CHECK(text.find("Detection at threshold") != std::string::npos);
    CHECK(report_to_json(rep).contains("detection") == false);
}
