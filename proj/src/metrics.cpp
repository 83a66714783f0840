#include "rosd/metrics.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace rosd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_or_nan(double sum, std::size_t n) {
    return n == 0 ? kNaN : sum / static_cast<double>(n);
}

bool spam_review(const Review& v) {
    return v.is_spam.value_or(false);
}

bool spammer(const Reviewer& r) {
    return r.is_spammer.value_or(false);
}

}  // namespace

Dataset strip_spam_reviews(const Dataset& d) {
    DatasetBuilder b;
    for (const Product& p : d.products()) b.add_product(p);
    for (const Reviewer& r : d.reviewers()) b.add_reviewer(r);
    // Re-add per reviewer in seq order with seq compacted to 1..n.
    for (std::size_t ri = 0; ri < d.num_reviewers(); ++ri) {
        int next = 1;
        for (std::size_t vi : d.reviews_of_reviewer(ri)) {
            const Review& v = d.reviews()[vi];
            if (spam_review(v)) continue;
            Review kept = v;
            kept.seq = next++;
            b.add_review(std::move(kept));
        }
    }
    return b.build();
}

EvaluationReport evaluate(const Dataset& d, const ScoreState& state,
                          const SolverConfig& before_cfg) {
    if (!state.covers(d)) throw IntegrityError("score state does not cover the dataset");
    bool any_label = false;
    for (const Review& v : d.reviews()) any_label |= v.is_spam.has_value();
    if (!any_label)
        throw ConfigError("dataset carries no ground-truth labels; cannot evaluate");

    EvaluationReport rep;

    // Sums run in canonical id order so the report is exactly invariant
    // under permutations of the dataset's storage order.
    double trust_honest = 0.0, trust_spam = 0.0;
    std::size_t n_honest = 0, n_spammer = 0;
    for (std::size_t i : d.reviewers_by_id()) {
        if (spammer(d.reviewers()[i])) {
            trust_spam += state.trust[i];
            ++n_spammer;
        } else {
            trust_honest += state.trust[i];
            ++n_honest;
        }
    }
    rep.avg_trust_honest = mean_or_nan(trust_honest, n_honest);
    rep.avg_trust_spammer = mean_or_nan(trust_spam, n_spammer);

    double h_nonspam = 0.0, h_spam = 0.0;
    std::size_t n_nonspam = 0, n_spam = 0;
    std::set<std::string> targets;
    for (std::size_t ri : d.reviewers_by_id()) {
        for (std::size_t i : d.reviews_of_reviewer(ri)) {  // seq-ascending
            const Review& v = d.reviews()[i];
            if (spam_review(v)) {
                h_spam += state.honesty[i];
                ++n_spam;
                targets.insert(v.product_id);
            } else {
                h_nonspam += state.honesty[i];
                ++n_nonspam;
            }
        }
    }
    rep.avg_honesty_nonspam = mean_or_nan(h_nonspam, n_nonspam);
    rep.avg_honesty_spam = mean_or_nan(h_spam, n_spam);

    if (targets.empty()) {
        // No spam: before and after coincide by definition.
        double sum = 0.0;
        for (double r : state.reliability) sum += r;
        rep.reliability_before = rep.reliability_after =
            mean_or_nan(sum, state.reliability.size());
        rep.deviation = 0.0;
        return rep;
    }
    rep.target_products.assign(targets.begin(), targets.end());

    const Dataset clean = strip_spam_reviews(d);
    const ScoreState before = solve(clean, before_cfg).state;

    double after_sum = 0.0, before_sum = 0.0, dev_sum = 0.0;
    for (const std::string& pid : rep.target_products) {
        const double after = state.reliability[d.product_index(pid)];
        const double bef = before.reliability[clean.product_index(pid)];
        after_sum += after;
        before_sum += bef;
        dev_sum += std::fabs(after - bef);
    }
    const double n = static_cast<double>(rep.target_products.size());
    rep.reliability_after = after_sum / n;
    rep.reliability_before = before_sum / n;
    rep.deviation = dev_sum / n;
    return rep;
}

DetectionReport detect(const Dataset& d, const ScoreState& state, double threshold) {
    if (!state.covers(d)) throw IntegrityError("score state does not cover the dataset");
    DetectionReport rep;
    rep.threshold = threshold;

    auto pr = [](std::size_t tp, std::size_t flagged, std::size_t positives, double& precision,
                 double& recall, double& f1) {
        precision = flagged == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(flagged);
        recall = positives == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(positives);
        f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    };

    std::size_t tp = 0, flagged = 0, positives = 0;
    for (std::size_t i = 0; i < d.num_reviews(); ++i) {
        const bool truth = spam_review(d.reviews()[i]);
        const bool flag = state.honesty[i] < threshold;
        positives += truth;
        flagged += flag;
        tp += truth && flag;
    }
    pr(tp, flagged, positives, rep.review_precision, rep.review_recall, rep.review_f1);

    tp = flagged = positives = 0;
    for (std::size_t i = 0; i < d.num_reviewers(); ++i) {
        const bool truth = spammer(d.reviewers()[i]);
        const bool flag = state.trust[i] < threshold;
        positives += truth;
        flagged += flag;
        tp += truth && flag;
    }
    pr(tp, flagged, positives, rep.reviewer_precision, rep.reviewer_recall, rep.reviewer_f1);
    return rep;
}

namespace {

std::string cell(double v) {
    if (std::isnan(v)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

nlohmann::json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

}  // namespace

std::string render_report(const EvaluationReport& report, const DetectionReport* detection) {
    static constexpr const char* kRows[] = {
        "Average trust of honest reviewers",
        "Average trust of spam attackers",
        "Average honesty of non-spam reviews",
        "Average honesty of spam reviews",
        "Average reliability of target products before spam",
        "Average reliability of target products after spam",
        "Deviation in product reliability",
    };
    const double vals[] = {
        report.avg_trust_honest,     report.avg_trust_spammer, report.avg_honesty_nonspam,
        report.avg_honesty_spam,     report.reliability_before, report.reliability_after,
        report.deviation,
    };
    std::ostringstream out;
    for (std::size_t i = 0; i < 7; ++i) {
        std::string name = kRows[i];
        name.resize(52, ' ');
        out << name << cell(vals[i]) << '\n';
    }
    if (detection) {
        out << '\n';
        out << "Detection at threshold " << cell(detection->threshold) << '\n';
        out << "  spam reviews:  precision " << cell(detection->review_precision) << "  recall "
            << cell(detection->review_recall) << "  f1 " << cell(detection->review_f1) << '\n';
        out << "  spammers:      precision " << cell(detection->reviewer_precision) << "  recall "
            << cell(detection->reviewer_recall) << "  f1 " << cell(detection->reviewer_f1)
            << '\n';
    }
    return out.str();
}

nlohmann::json report_to_json(const EvaluationReport& report, const DetectionReport* detection) {
    nlohmann::json j{
        {"avg_trust_honest", json_number(report.avg_trust_honest)},
        {"avg_trust_spammer", json_number(report.avg_trust_spammer)},
        {"avg_honesty_nonspam", json_number(report.avg_honesty_nonspam)},
        {"avg_honesty_spam", json_number(report.avg_honesty_spam)},
        {"reliability_before", json_number(report.reliability_before)},
        {"reliability_after", json_number(report.reliability_after)},
        {"deviation", report.deviation},
        {"target_products", report.target_products},
    };
    if (detection) {
        j["detection"] = {
            {"threshold", detection->threshold},
            {"review_precision", detection->review_precision},
            {"review_recall", detection->review_recall},
            {"review_f1", detection->review_f1},
            {"reviewer_precision", detection->reviewer_precision},
            {"reviewer_recall", detection->reviewer_recall},
            {"reviewer_f1", detection->reviewer_f1},
        };
    }
    return j;
}

}  // namespace rosd
