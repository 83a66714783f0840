#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rosd/dataset.hpp"
#include "rosd/engine.hpp"

namespace rosd {

/// The seven benchmark rows for one labeled dataset/run. Averages over an
/// empty group (no spammers in the data, say) are NaN and render as "-".
/// Ground-truth labels are read here and nowhere else; reviews and reviewers
/// without labels count as non-spam/honest (real-world exports carry labels
/// only on injected records).
struct EvaluationReport {
    double avg_trust_honest = 0.0;
    double avg_trust_spammer = 0.0;
    double avg_honesty_nonspam = 0.0;
    double avg_honesty_spam = 0.0;
    double reliability_before = 0.0;  // mean over targets, spam reviews removed + re-solved
    double reliability_after = 0.0;   // mean over targets as scored
    double deviation = 0.0;           // mean per-target |after - before|
    std::vector<std::string> target_products;  // products with >= 1 spam review, by id
};

/// Threshold detector readout: a review is flagged iff honesty < threshold,
/// a reviewer iff trust < threshold. Empty flag set reports precision 1,
/// recall 0 (when positives exist).
struct DetectionReport {
    double threshold = 0.5;
    double review_precision = 1.0, review_recall = 0.0, review_f1 = 0.0;
    double reviewer_precision = 1.0, reviewer_recall = 0.0, reviewer_f1 = 0.0;
};

/// Throws ConfigError when the dataset carries no ground-truth labels at all.
/// The "before" column re-runs the solver on a copy with spam-labeled reviews
/// deleted (surviving seq values compacted per reviewer, order preserved).
EvaluationReport evaluate(const Dataset& d, const ScoreState& state,
                          const SolverConfig& before_cfg = {});

DetectionReport detect(const Dataset& d, const ScoreState& state, double threshold);

/// Dataset minus spam-labeled reviews; what the "before" column is solved on.
Dataset strip_spam_reviews(const Dataset& d);

std::string render_report(const EvaluationReport& report,
                          const DetectionReport* detection = nullptr);
nlohmann::json report_to_json(const EvaluationReport& report,
                              const DetectionReport* detection = nullptr);

}  // namespace rosd
