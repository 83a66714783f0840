#include "rosd/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace rosd {

namespace {

using nlohmann::json;

double parse_double_field(const std::string& s, std::size_t line_no, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(line_no, std::string("bad ") + what + ": '" + s + "'");
    return v;
}

int parse_seq_field(const std::string& s, std::size_t line_no) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1)
        throw ParseError(line_no, "bad seq (positive integer expected): '" + s + "'");
    return v;
}

std::optional<bool> parse_spam_field(const std::string& s, std::size_t line_no) {
    if (s.empty()) return std::nullopt;
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw ParseError(line_no, "bad is_spam (0/1/true/false expected): '" + s + "'");
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void check_score_range(double v, std::size_t line_no) {
    if (!(v >= 0.0 && v <= kMaxRawScore))
        throw ParseError(line_no, "score out of range [0,5]: " + std::to_string(v));
}

Dataset load_csv(std::istream& in) {
    DatasetBuilder b;
    std::string line;
    std::size_t line_no = 0;
    // column slots, -1 = absent
    int col_reviewer = 0, col_product = 1, col_score = 2, col_seq = -1, col_spam = -1;
    bool saw_header_or_row = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (!saw_header_or_row) {
            saw_header_or_row = true;
            if (fields[0] == "reviewer_id") {
                col_reviewer = col_product = col_score = col_seq = col_spam = -1;
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    const std::string& name = fields[i];
                    int idx = static_cast<int>(i);
                    if (name == "reviewer_id") col_reviewer = idx;
                    else if (name == "product_id") col_product = idx;
                    else if (name == "score") col_score = idx;
                    else if (name == "seq") col_seq = idx;
                    else if (name == "is_spam") col_spam = idx;
                    else throw ParseError(line_no, "unknown csv column: '" + name + "'");
                }
                if (col_reviewer < 0 || col_product < 0 || col_score < 0)
                    throw ParseError(line_no, "header must name reviewer_id, product_id, score");
                continue;
            }
            // headerless: positional reviewer,product,score[,seq][,is_spam]
            if (fields.size() >= 4) col_seq = 3;
            if (fields.size() >= 5) col_spam = 4;
        }
        std::size_t needed = static_cast<std::size_t>(
            std::max({col_reviewer, col_product, col_score, col_seq, col_spam}) + 1);
        if (fields.size() < needed)
            throw ParseError(line_no, "expected " + std::to_string(needed) + " fields, got " +
                                          std::to_string(fields.size()));
        Review v;
        v.reviewer_id = fields[col_reviewer];
        v.product_id = fields[col_product];
        if (v.reviewer_id.empty() || v.product_id.empty())
            throw ParseError(line_no, "empty reviewer_id or product_id");
        v.score = parse_double_field(fields[col_score], line_no, "score");
        check_score_range(v.score, line_no);
        if (col_seq >= 0) v.seq = parse_seq_field(fields[col_seq], line_no);
        if (col_spam >= 0) v.is_spam = parse_spam_field(fields[col_spam], line_no);
        b.add_review(std::move(v));
    }
    Dataset d = b.build();
    // CSV cannot carry reviewer records; a reviewer is a labeled spammer iff
    // the file labels any of their reviews as spam.
    bool any_label = false;
    for (const Review& v : d.reviews()) any_label |= v.is_spam.has_value();
    if (!any_label) return d;
    DatasetBuilder relabel;
    for (const Product& p : d.products()) relabel.add_product(p);
    for (const Reviewer& r : d.reviewers()) {
        bool spammer = false;
        for (std::size_t vi : d.reviews_of_reviewer(d.reviewer_index(r.id)))
            spammer |= d.reviews()[vi].is_spam.value_or(false);
        relabel.add_reviewer(Reviewer{r.id, spammer});
    }
    for (const Review& v : d.reviews()) relabel.add_review(v);
    return relabel.build();
}

template <typename T>
T get_field(const json& j, const char* key, std::size_t line_no) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(line_no, std::string("field '") + key + "': " + e.what());
    }
}

Dataset load_jsonl(std::istream& in) {
    DatasetBuilder b;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!j.is_object()) throw ParseError(line_no, "expected a json object");
        if (j.contains("product")) {
            Product p;
            p.id = get_field<std::string>(j, "product", line_no);
            if (j.contains("quality")) {
                p.true_quality = get_field<double>(j, "quality", line_no);
                check_score_range(*p.true_quality, line_no);
            }
            b.add_product(std::move(p));
        } else if (j.contains("reviewer")) {
            Reviewer r;
            r.id = get_field<std::string>(j, "reviewer", line_no);
            if (j.contains("is_spammer")) r.is_spammer = get_field<bool>(j, "is_spammer", line_no);
            b.add_reviewer(std::move(r));
        } else {
            Review v;
            v.reviewer_id = get_field<std::string>(j, "reviewer_id", line_no);
            v.product_id = get_field<std::string>(j, "product_id", line_no);
            v.score = get_field<double>(j, "score", line_no);
            check_score_range(v.score, line_no);
            if (j.contains("seq")) {
                v.seq = get_field<int>(j, "seq", line_no);
                if (v.seq < 1) throw ParseError(line_no, "seq must be >= 1");
            }
            if (j.contains("is_spam")) v.is_spam = get_field<bool>(j, "is_spam", line_no);
            b.add_review(std::move(v));
        }
    }
    return b.build();
}

void save_csv(const Dataset& d, std::ostream& out) {
    bool any_label = false;
    for (const Review& v : d.reviews()) any_label |= v.is_spam.has_value();
    out << "reviewer_id,product_id,score,seq";
    if (any_label) out << ",is_spam";
    out << '\n';
    for (const Review& v : d.reviews()) {
        out << v.reviewer_id << ',' << v.product_id << ',' << format_double(v.score) << ','
            << v.seq;
        if (any_label) {
            out << ',';
            if (v.is_spam) out << (*v.is_spam ? '1' : '0');
        }
        out << '\n';
    }
}

void save_jsonl(const Dataset& d, std::ostream& out) {
    for (std::size_t i : d.products_by_id()) {
        const Product& p = d.products()[i];
        json j{{"product", p.id}};
        if (p.true_quality) j["quality"] = *p.true_quality;
        out << j.dump() << '\n';
    }
    for (std::size_t i : d.reviewers_by_id()) {
        const Reviewer& r = d.reviewers()[i];
        json j{{"reviewer", r.id}};
        if (r.is_spammer) j["is_spammer"] = *r.is_spammer;
        out << j.dump() << '\n';
    }
    for (const Review& v : d.reviews()) {
        json j{{"reviewer_id", v.reviewer_id},
               {"product_id", v.product_id},
               {"score", v.score},
               {"seq", v.seq}};
        if (v.is_spam) j["is_spam"] = *v.is_spam;
        out << j.dump() << '\n';
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

FileFormat format_from_name(const std::string& name) {
    if (name == "csv") return FileFormat::csv;
    if (name == "jsonl") return FileFormat::jsonl;
    throw ConfigError("unknown format: '" + name + "' (expected csv or jsonl)");
}

FileFormat format_for_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".csv") return FileFormat::csv;
    return FileFormat::jsonl;
}

Dataset load_dataset(const std::filesystem::path& path, FileFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return format == FileFormat::csv ? load_csv(in) : load_jsonl(in);
}

Dataset load_dataset(const std::filesystem::path& path) {
    return load_dataset(path, format_for_path(path));
}

void save_dataset(const Dataset& d, const std::filesystem::path& path, FileFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    if (format == FileFormat::csv)
        save_csv(d, out);
    else
        save_jsonl(d, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
    save_dataset(d, path, format_for_path(path));
}

}  // namespace rosd
