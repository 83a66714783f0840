#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rosd/errors.hpp"
#include "rosd/scores.hpp"

namespace rosd {

/// One scored opinion. seq is the 1-based position inside its reviewer's own
/// stream (1 = oldest). is_spam is ground truth carried for evaluation only;
/// the scoring engine never reads it.
struct Review {
    std::string reviewer_id;
    std::string product_id;
    double score = 0.0;
    int seq = 0;  // 0 = unassigned, resolved by DatasetBuilder::build()
    std::optional<bool> is_spam;
};

struct Reviewer {
    std::string id;
    std::optional<bool> is_spammer;  // ground truth, evaluation only
};

struct Product {
    std::string id;
    std::optional<double> true_quality;  // simulation ground truth, evaluation only
};

/// Immutable reviewer/review/product graph. Construct via DatasetBuilder;
/// safe for concurrent reads afterwards.
class Dataset {
  public:
    const std::vector<Product>& products() const { return products_; }
    const std::vector<Reviewer>& reviewers() const { return reviewers_; }
    const std::vector<Review>& reviews() const { return reviews_; }

    bool has_product(const std::string& id) const { return product_by_id_.count(id) != 0; }
    bool has_reviewer(const std::string& id) const { return reviewer_by_id_.count(id) != 0; }
    std::size_t product_index(const std::string& id) const;
    std::size_t reviewer_index(const std::string& id) const;

    /// Indices into reviews(), ascending by seq.
    std::span<const std::size_t> reviews_of_reviewer(std::size_t reviewer_idx) const;
    /// Indices into reviews(), ascending by (reviewer id, seq).
    std::span<const std::size_t> reviews_of_product(std::size_t product_idx) const;
    std::vector<std::size_t> reviews_of_product_by_reviewer(std::size_t product_idx,
                                                            std::size_t reviewer_idx) const;

    /// Collection indices ordered by id, the canonical iteration order used
    /// everywhere determinism matters (serialization, engine summation).
    const std::vector<std::size_t>& products_by_id() const { return products_sorted_; }
    const std::vector<std::size_t>& reviewers_by_id() const { return reviewers_sorted_; }

    std::size_t num_products() const { return products_.size(); }
    std::size_t num_reviewers() const { return reviewers_.size(); }
    std::size_t num_reviews() const { return reviews_.size(); }
    bool empty() const { return reviews_.empty() && products_.empty() && reviewers_.empty(); }

    /// Order-insensitive equality over all fields, labels included.
    bool operator==(const Dataset& other) const;

  private:
    friend class DatasetBuilder;
    Dataset() = default;

    std::vector<Product> products_;
    std::vector<Reviewer> reviewers_;
    std::vector<Review> reviews_;
    std::unordered_map<std::string, std::size_t> product_by_id_;
    std::unordered_map<std::string, std::size_t> reviewer_by_id_;

    // CSR adjacency over reviews_, built once.
    std::vector<std::size_t> reviewer_adj_, reviewer_off_;
    std::vector<std::size_t> product_adj_, product_off_;
    std::vector<std::size_t> products_sorted_, reviewers_sorted_;
};

/// Accumulates records and resolves invariants in build(): per-reviewer seq
/// integrity (explicit seqs must form 1..n; absent seqs are assigned from
/// insertion order; mixing both within one reviewer is an error), referential
/// integrity, score range, id uniqueness.
class DatasetBuilder {
  public:
    /// auto_register: reviews may name reviewers/products that were never
    /// explicitly added (the file formats work this way). Disable to get
    /// dangling-reference checking for programmatic construction.
    explicit DatasetBuilder(bool auto_register = true) : auto_register_(auto_register) {}

    DatasetBuilder& add_product(Product p);
    DatasetBuilder& add_reviewer(Reviewer r);
    DatasetBuilder& add_review(Review v);

    Dataset build();

  private:
    std::size_t intern_product(const std::string& id);
    std::size_t intern_reviewer(const std::string& id);

    bool auto_register_;
    Dataset d_;
    std::vector<bool> product_explicit_, reviewer_explicit_;
};

}  // namespace rosd
