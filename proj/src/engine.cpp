#include "rosd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace rosd {

ScoreState ScoreState::uniform(const Dataset& d, double value) {
    ScoreState s;
    s.trust.assign(d.num_reviewers(), value);
    s.honesty.assign(d.num_reviews(), value);
    s.reliability.assign(d.num_products(), value);
    return s;
}

bool ScoreState::covers(const Dataset& d) const {
    return trust.size() == d.num_reviewers() && honesty.size() == d.num_reviews() &&
           reliability.size() == d.num_products();
}

double ScoreState::trust_of(const Dataset& d, const std::string& reviewer_id) const {
    return trust[d.reviewer_index(reviewer_id)];
}

double ScoreState::reliability_of(const Dataset& d, const std::string& product_id) const {
    return reliability[d.product_index(product_id)];
}

UnitScore review_honesty(UnitScore s_norm, UnitScore reliability) {
    return UnitScore(kernels::honesty_point(s_norm.value(), reliability.value()));
}

double reviewer_trust(std::span<const SeqHonesty> reviews) {
    if (reviews.empty()) return 0.5;
    double num = 0.0, den = 0.0;
    for (const auto& [seq, honesty] : reviews) {
        num += static_cast<double>(seq) * honesty;
        den += static_cast<double>(seq);
    }
    return num / den;
}

double product_reliability(std::span<const ReliabilityEntry> entries) {
    double num = 0.0, den = 0.0;
    for (const auto& e : entries) {
        const double w = e.trust * e.honesty;
        num += w * e.s_norm;
        den += w;
    }
    return den > 0.0 ? num / den : 0.5;
}

namespace {

// Dataset recompiled into flat arrays for the kernels. Review positions are
// sorted by (reviewer id rank, seq) and node axes by id, which fixes one
// canonical summation order: solve output is invariant, bit for bit, under
// any permutation of the input collections.
struct Compiled {
    std::size_t nr = 0, np = 0, nv = 0;
    std::vector<std::size_t> review_at;       // position -> dataset review index
    std::vector<double> s_norm;               // by position
    std::vector<std::int32_t> reviewer_of;    // reviewer rank by position
    std::vector<std::int32_t> product_of;     // product rank by position
    std::vector<double> seq_w;                // double(seq) by position
    std::vector<std::size_t> reviewer_row;    // nr+1, rows contiguous in position space
    std::vector<std::size_t> product_row;     // np+1, offsets into product_perm
    std::vector<std::size_t> product_perm;    // positions grouped per product
    std::vector<double> seq_w_sum;            // per reviewer rank
    std::vector<std::size_t> reviewer_idx;    // rank -> dataset reviewer index
    std::vector<std::size_t> product_idx;     // rank -> dataset product index
};

Compiled compile(const Dataset& d) {
    Compiled g;
    g.nr = d.num_reviewers();
    g.np = d.num_products();
    g.nv = d.num_reviews();

    g.reviewer_idx = d.reviewers_by_id();
    g.product_idx = d.products_by_id();
    std::vector<std::int32_t> reviewer_rank(g.nr), product_rank(g.np);
    for (std::size_t k = 0; k < g.nr; ++k) reviewer_rank[g.reviewer_idx[k]] = static_cast<std::int32_t>(k);
    for (std::size_t k = 0; k < g.np; ++k) product_rank[g.product_idx[k]] = static_cast<std::int32_t>(k);

    g.review_at.reserve(g.nv);
    g.reviewer_row.assign(g.nr + 1, 0);
    g.seq_w_sum.assign(g.nr, 0.0);
    for (std::size_t k = 0; k < g.nr; ++k) {
        g.reviewer_row[k] = g.review_at.size();
        auto adj = d.reviews_of_reviewer(g.reviewer_idx[k]);  // already seq-ascending
        g.review_at.insert(g.review_at.end(), adj.begin(), adj.end());
    }
    g.reviewer_row[g.nr] = g.review_at.size();

    g.s_norm.resize(g.nv);
    g.reviewer_of.resize(g.nv);
    g.product_of.resize(g.nv);
    g.seq_w.resize(g.nv);
    std::vector<std::size_t> pos_of_review(g.nv);
    for (std::size_t pos = 0; pos < g.nv; ++pos) {
        const Review& v = d.reviews()[g.review_at[pos]];
        pos_of_review[g.review_at[pos]] = pos;
        g.s_norm[pos] = v.score / kMaxRawScore;
        g.reviewer_of[pos] = reviewer_rank[d.reviewer_index(v.reviewer_id)];
        g.product_of[pos] = product_rank[d.product_index(v.product_id)];
        g.seq_w[pos] = static_cast<double>(v.seq);
    }
    for (std::size_t k = 0; k < g.nr; ++k)
        for (std::size_t p = g.reviewer_row[k]; p < g.reviewer_row[k + 1]; ++p)
            g.seq_w_sum[k] += g.seq_w[p];

    g.product_row.assign(g.np + 1, 0);
    g.product_perm.reserve(g.nv);
    for (std::size_t k = 0; k < g.np; ++k) {
        g.product_row[k] = g.product_perm.size();
        // dataset adjacency is (reviewer id, seq)-ascending, the canonical order
        for (std::size_t vi : d.reviews_of_product(g.product_idx[k]))
            g.product_perm.push_back(pos_of_review[vi]);
    }
    g.product_row[g.np] = g.product_perm.size();
    return g;
}

struct PassBuffers {
    std::vector<double> w, ws;
    explicit PassBuffers(std::size_t nv) : w(nv), ws(nv) {}
};

// One staged update. rel_in is the previous reliability (by product rank);
// everything else is written fresh.
void run_pass(const Compiled& g, const kernels::Ops& ops, const std::vector<double>& rel_in,
              std::vector<double>& h_out, std::vector<double>& trust_out,
              std::vector<double>& rel_out, PassBuffers& buf) {
    ops.honesty_update(g.nv, g.s_norm.data(), g.product_of.data(), rel_in.data(), h_out.data());

    ops.mul(g.nv, g.seq_w.data(), h_out.data(), buf.w.data());
    for (std::size_t k = 0; k < g.nr; ++k) {
        const std::size_t lo = g.reviewer_row[k], hi = g.reviewer_row[k + 1];
        if (lo == hi) {
            trust_out[k] = 0.5;
            continue;
        }
        double num = 0.0;
        for (std::size_t p = lo; p < hi; ++p) num += buf.w[p];
        trust_out[k] = num / g.seq_w_sum[k];
    }

    ops.gather_mul(g.nv, g.reviewer_of.data(), trust_out.data(), h_out.data(), buf.w.data());
    ops.mul(g.nv, buf.w.data(), g.s_norm.data(), buf.ws.data());
    for (std::size_t k = 0; k < g.np; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = g.product_row[k]; j < g.product_row[k + 1]; ++j) {
            const std::size_t p = g.product_perm[j];
            num += buf.ws[p];
            den += buf.w[p];
        }
        rel_out[k] = den > 0.0 ? num / den : 0.5;
    }
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

ScoreState to_dataset_order(const Compiled& g, const std::vector<double>& h,
                            const std::vector<double>& trust, const std::vector<double>& rel) {
    ScoreState s;
    s.trust.resize(g.nr);
    s.honesty.resize(g.nv);
    s.reliability.resize(g.np);
    for (std::size_t k = 0; k < g.nr; ++k) s.trust[g.reviewer_idx[k]] = trust[k];
    for (std::size_t k = 0; k < g.np; ++k) s.reliability[g.product_idx[k]] = rel[k];
    for (std::size_t pos = 0; pos < g.nv; ++pos) s.honesty[g.review_at[pos]] = h[pos];
    return s;
}

}  // namespace

ScoreState iterate_once(const Dataset& d, const ScoreState& prev) {
    if (!prev.covers(d))
        throw IntegrityError("score state does not cover the dataset (size mismatch)");
    Compiled g = compile(d);
    std::vector<double> rel_in(g.np);
    for (std::size_t k = 0; k < g.np; ++k) rel_in[k] = prev.reliability[g.product_idx[k]];
    std::vector<double> h(g.nv), trust(g.nr), rel(g.np);
    PassBuffers buf(g.nv);
    run_pass(g, kernels::active_ops(), rel_in, h, trust, rel, buf);
    return to_dataset_order(g, h, trust, rel);
}

SolverResult solve_with_backend(const Dataset& d, const SolverConfig& cfg,
                                const kernels::Ops& ops) {
    if (!(cfg.tolerance > 0.0)) throw ConfigError("solver tolerance must be > 0");
    if (cfg.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");

    Compiled g = compile(d);
    std::vector<double> h_prev(g.nv, cfg.initial_value), trust_prev(g.nr, cfg.initial_value),
        rel_prev(g.np, cfg.initial_value);
    std::vector<double> h(g.nv), trust(g.nr), rel(g.np);
    PassBuffers buf(g.nv);

    SolverResult res;
    for (;;) {
        run_pass(g, ops, rel_prev, h, trust, rel, buf);
        ++res.iterations;
        double delta = max_abs_diff(h, h_prev);
        delta = std::max(delta, max_abs_diff(trust, trust_prev));
        delta = std::max(delta, max_abs_diff(rel, rel_prev));
        res.final_delta = delta;
        h.swap(h_prev);
        trust.swap(trust_prev);
        rel.swap(rel_prev);
        if (delta <= cfg.tolerance) {
            res.converged = true;
            break;
        }
        if (res.iterations >= cfg.max_iterations) break;
    }
    res.state = to_dataset_order(g, h_prev, trust_prev, rel_prev);
    return res;
}

SolverResult solve(const Dataset& d, const SolverConfig& cfg) {
    return solve_with_backend(d, cfg, kernels::active_ops());
}

}  // namespace rosd
