#include "rosd/dataset.hpp"

#include <algorithm>
#include <tuple>

namespace rosd {

std::size_t Dataset::product_index(const std::string& id) const {
    auto it = product_by_id_.find(id);
    if (it == product_by_id_.end()) throw IntegrityError("unknown product id: " + id);
    return it->second;
}

std::size_t Dataset::reviewer_index(const std::string& id) const {
    auto it = reviewer_by_id_.find(id);
    if (it == reviewer_by_id_.end()) throw IntegrityError("unknown reviewer id: " + id);
    return it->second;
}

std::span<const std::size_t> Dataset::reviews_of_reviewer(std::size_t reviewer_idx) const {
    return {reviewer_adj_.data() + reviewer_off_[reviewer_idx],
            reviewer_off_[reviewer_idx + 1] - reviewer_off_[reviewer_idx]};
}

std::span<const std::size_t> Dataset::reviews_of_product(std::size_t product_idx) const {
    return {product_adj_.data() + product_off_[product_idx],
            product_off_[product_idx + 1] - product_off_[product_idx]};
}

std::vector<std::size_t> Dataset::reviews_of_product_by_reviewer(std::size_t product_idx,
                                                                 std::size_t reviewer_idx) const {
    std::vector<std::size_t> out;
    for (std::size_t v : reviews_of_product(product_idx))
        if (reviewer_by_id_.at(reviews_[v].reviewer_id) == reviewer_idx) out.push_back(v);
    return out;
}

namespace {

// Canonical tuple views for order-insensitive comparison.
auto product_key(const Product& p) { return std::tie(p.id); }
auto reviewer_key(const Reviewer& r) { return std::tie(r.id); }

template <typename T, typename Key>
std::vector<T> sorted_by(const std::vector<T>& in, Key key) {
    std::vector<T> out = in;
    std::sort(out.begin(), out.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
    return out;
}

}  // namespace

bool Dataset::operator==(const Dataset& other) const {
    auto pa = sorted_by(products_, product_key);
    auto pb = sorted_by(other.products_, product_key);
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i].id != pb[i].id || pa[i].true_quality != pb[i].true_quality) return false;

    auto ra = sorted_by(reviewers_, reviewer_key);
    auto rb = sorted_by(other.reviewers_, reviewer_key);
    if (ra.size() != rb.size()) return false;
    for (std::size_t i = 0; i < ra.size(); ++i)
        if (ra[i].id != rb[i].id || ra[i].is_spammer != rb[i].is_spammer) return false;

    auto review_key = [](const Review& v) { return std::tie(v.reviewer_id, v.seq); };
    auto va = sorted_by(reviews_, review_key);
    auto vb = sorted_by(other.reviews_, review_key);
    if (va.size() != vb.size()) return false;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const Review &a = va[i], &b = vb[i];
        if (a.reviewer_id != b.reviewer_id || a.product_id != b.product_id ||
            a.score != b.score || a.seq != b.seq || a.is_spam != b.is_spam)
            return false;
    }
    return true;
}

std::size_t DatasetBuilder::intern_product(const std::string& id) {
    auto it = d_.product_by_id_.find(id);
    if (it != d_.product_by_id_.end()) return it->second;
    d_.product_by_id_.emplace(id, d_.products_.size());
    d_.products_.push_back(Product{id, std::nullopt});
    product_explicit_.push_back(false);
    return d_.products_.size() - 1;
}

std::size_t DatasetBuilder::intern_reviewer(const std::string& id) {
    auto it = d_.reviewer_by_id_.find(id);
    if (it != d_.reviewer_by_id_.end()) return it->second;
    d_.reviewer_by_id_.emplace(id, d_.reviewers_.size());
    d_.reviewers_.push_back(Reviewer{id, std::nullopt});
    reviewer_explicit_.push_back(false);
    return d_.reviewers_.size() - 1;
}

DatasetBuilder& DatasetBuilder::add_product(Product p) {
    if (p.true_quality) Score(*p.true_quality);  // range check
    auto it = d_.product_by_id_.find(p.id);
    if (it != d_.product_by_id_.end()) {
        if (product_explicit_[it->second])
            throw IntegrityError("duplicate product id: " + p.id);
        d_.products_[it->second] = std::move(p);
        product_explicit_[it->second] = true;
        return *this;
    }
    d_.product_by_id_.emplace(p.id, d_.products_.size());
    d_.products_.push_back(std::move(p));
    product_explicit_.push_back(true);
    return *this;
}

DatasetBuilder& DatasetBuilder::add_reviewer(Reviewer r) {
    auto it = d_.reviewer_by_id_.find(r.id);
    if (it != d_.reviewer_by_id_.end()) {
        if (reviewer_explicit_[it->second])
            throw IntegrityError("duplicate reviewer id: " + r.id);
        d_.reviewers_[it->second] = std::move(r);
        reviewer_explicit_[it->second] = true;
        return *this;
    }
    d_.reviewer_by_id_.emplace(r.id, d_.reviewers_.size());
    d_.reviewers_.push_back(std::move(r));
    reviewer_explicit_.push_back(true);
    return *this;
}

DatasetBuilder& DatasetBuilder::add_review(Review v) {
    Score(v.score);  // range check
    if (v.seq < 0) throw IntegrityError("negative seq for reviewer " + v.reviewer_id);
    if (auto_register_) {
        intern_reviewer(v.reviewer_id);
        intern_product(v.product_id);
    } else {
        if (!d_.reviewer_by_id_.count(v.reviewer_id))
            throw IntegrityError("dangling reviewer reference: " + v.reviewer_id);
        if (!d_.product_by_id_.count(v.product_id))
            throw IntegrityError("dangling product reference: " + v.product_id);
    }
    d_.reviews_.push_back(std::move(v));
    return *this;
}

Dataset DatasetBuilder::build() {
    Dataset d = std::move(d_);
    const std::size_t nr = d.reviewers_.size();
    const std::size_t np = d.products_.size();
    const std::size_t nv = d.reviews_.size();

    // Group review indices per reviewer in insertion order.
    std::vector<std::vector<std::size_t>> by_reviewer(nr);
    for (std::size_t i = 0; i < nv; ++i)
        by_reviewer[d.reviewer_by_id_.at(d.reviews_[i].reviewer_id)].push_back(i);

    // Resolve seq per reviewer: all explicit (must be exactly 1..n) or all
    // absent (assigned from insertion order).
    for (std::size_t r = 0; r < nr; ++r) {
        auto& rows = by_reviewer[r];
        std::size_t n_explicit = 0;
        for (std::size_t i : rows) n_explicit += d.reviews_[i].seq > 0;
        const std::string& rid = d.reviewers_[r].id;
        if (n_explicit == 0) {
            int next = 1;
            for (std::size_t i : rows) d.reviews_[i].seq = next++;
        } else if (n_explicit == rows.size()) {
            std::vector<char> seen(rows.size(), 0);
            for (std::size_t i : rows) {
                int s = d.reviews_[i].seq;
                if (s < 1 || static_cast<std::size_t>(s) > rows.size())
                    throw IntegrityError("reviewer " + rid + ": seq " + std::to_string(s) +
                                         " outside 1.." + std::to_string(rows.size()));
                if (seen[s - 1])
                    throw IntegrityError("reviewer " + rid + ": duplicate seq " +
                                         std::to_string(s));
                seen[s - 1] = 1;
            }
        } else {
            throw IntegrityError("reviewer " + rid + ": seq present on some reviews but not all");
        }
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            return d.reviews_[a].seq < d.reviews_[b].seq;
        });
    }

    d.reviewer_off_.assign(nr + 1, 0);
    d.reviewer_adj_.reserve(nv);
    for (std::size_t r = 0; r < nr; ++r) {
        d.reviewer_off_[r] = d.reviewer_adj_.size();
        d.reviewer_adj_.insert(d.reviewer_adj_.end(), by_reviewer[r].begin(), by_reviewer[r].end());
    }
    d.reviewer_off_[nr] = d.reviewer_adj_.size();

    std::vector<std::vector<std::size_t>> by_product(np);
    for (std::size_t i = 0; i < nv; ++i)
        by_product[d.product_by_id_.at(d.reviews_[i].product_id)].push_back(i);
    d.product_off_.assign(np + 1, 0);
    d.product_adj_.reserve(nv);
    for (std::size_t p = 0; p < np; ++p) {
        auto& rows = by_product[p];
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            const Review &va = d.reviews_[a], &vb = d.reviews_[b];
            return std::tie(va.reviewer_id, va.seq) < std::tie(vb.reviewer_id, vb.seq);
        });
        d.product_off_[p] = d.product_adj_.size();
        d.product_adj_.insert(d.product_adj_.end(), rows.begin(), rows.end());
    }
    d.product_off_[np] = d.product_adj_.size();

    auto sorted_indices = [](std::size_t n, auto id_of) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return id_of(a) < id_of(b); });
        return idx;
    };
    d.products_sorted_ =
        sorted_indices(np, [&](std::size_t i) -> const std::string& { return d.products_[i].id; });
    d.reviewers_sorted_ =
        sorted_indices(nr, [&](std::size_t i) -> const std::string& { return d.reviewers_[i].id; });

    return d;
}

}  // namespace rosd
