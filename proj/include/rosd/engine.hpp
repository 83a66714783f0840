#pragma once

#include <span>
#include <vector>

#include "rosd/dataset.hpp"
#include "rosd/kernels.hpp"
#include "rosd/scores.hpp"

namespace rosd {

/// Trust/honesty/reliability assignment for every reviewer/review/product of
/// one Dataset, indexed by the Dataset's collection order.
struct ScoreState {
    std::vector<double> trust;        // reviewers()[i]
    std::vector<double> honesty;      // reviews()[i]
    std::vector<double> reliability;  // products()[i]

    static ScoreState uniform(const Dataset& d, double value);
    bool covers(const Dataset& d) const;

    double trust_of(const Dataset& d, const std::string& reviewer_id) const;
    double reliability_of(const Dataset& d, const std::string& product_id) const;
};

struct SolverConfig {
    double tolerance = 1e-6;   // threshold on the max absolute per-entry change
    int max_iterations = 1000;
    double initial_value = 0.5;  // uniform start for all three score kinds
};

struct SolverResult {
    ScoreState state;
    int iterations = 0;
    bool converged = false;
    double final_delta = 0.0;
};

// --- Pointwise score formulas ---------------------------------------------
//
// Honesty measures how close a review's normalized score sits to its
// product's reliability, scaled by the largest deviation achievable at that
// reliability, W = max(R, 1-R). Values below 0 (possible only transiently
// away from the fixed point) clamp to 0.

UnitScore review_honesty(UnitScore s_norm, UnitScore reliability);

struct SeqHonesty {
    int seq;         // 1-based position in the reviewer's stream, 1 = oldest
    double honesty;
};

/// Recency-weighted mean honesty: sum(seq*h) / sum(seq). Empty input falls
/// back to 0.5 (no evidence either way).
double reviewer_trust(std::span<const SeqHonesty> reviews);

struct ReliabilityEntry {
    double trust;
    double honesty;
    double s_norm;
};

/// Trust-and-honesty weighted mean of normalized scores. Falls back to 0.5
/// when the total weight is zero (no entries, or every weight vanished).
double product_reliability(std::span<const ReliabilityEntry> entries);

// --- Iteration --------------------------------------------------------------

/// One synchronous pass: honesty from prev reliability, then trust from the
/// new honesty, then reliability from the new trust and honesty. Throws
/// IntegrityError if prev does not cover d.
ScoreState iterate_once(const Dataset& d, const ScoreState& prev);

/// Repeats the pass until the max absolute change over all three score maps
/// drops to cfg.tolerance or max_iterations is hit. Deterministic for a given
/// (d, cfg): sums run in a canonical id-keyed order, so permuting the review
/// collection does not change a single output bit.
SolverResult solve(const Dataset& d, const SolverConfig& cfg = {});

/// Same, with an explicit kernel backend (solve uses the runtime-dispatched
/// one). Backends are bit-equivalent; this exists so tests can prove it.
SolverResult solve_with_backend(const Dataset& d, const SolverConfig& cfg,
                                const kernels::Ops& ops);

}  // namespace rosd
