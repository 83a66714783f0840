#include "rosd/scores_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace rosd {

namespace {

using nlohmann::json;

struct Row {
    std::string kind, id;
    double value;
};

void emit_rows(const Dataset& d, const ScoreState& state, auto&& sink) {
    for (std::size_t i : d.reviewers_by_id()) sink("trust", d.reviewers()[i].id, state.trust[i]);
    for (std::size_t row = 0; row < d.num_reviews(); ++row)
        sink("honesty", review_ref(row), state.honesty[row]);
    for (std::size_t i : d.products_by_id())
        sink("reliability", d.products()[i].id, state.reliability[i]);
}

void save_csv(const Dataset& d, const ScoreState& state, const RunMeta& meta, std::ostream& out) {
    out << "kind,id,value\n";
    emit_rows(d, state, [&](const char* kind, const std::string& id, double v) {
        out << kind << ',' << id << ',' << format_double(v) << '\n';
    });
    out << "meta,iterations," << meta.iterations << '\n';
    out << "meta,converged," << (meta.converged ? 1 : 0) << '\n';
    out << "meta,final_delta," << format_double(meta.final_delta) << '\n';
    out << "meta,tolerance," << format_double(meta.tolerance) << '\n';
}

void save_jsonl(const Dataset& d, const ScoreState& state, const RunMeta& meta,
                std::ostream& out) {
    emit_rows(d, state, [&](const char* kind, const std::string& id, double v) {
        out << json{{"kind", kind}, {"id", id}, {"value", v}}.dump() << '\n';
    });
    out << json{{"kind", "meta"},
                {"iterations", meta.iterations},
                {"converged", meta.converged},
                {"final_delta", meta.final_delta},
                {"tolerance", meta.tolerance}}
               .dump()
        << '\n';
}

std::size_t review_row_from_ref(const std::string& id, const Dataset& d, std::size_t line_no) {
    if (id.size() < 2 || id[0] != 'v')
        throw ParseError(line_no, "bad review ref (expected v<row>): '" + id + "'");
    std::size_t row = 0;
    auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), row);
    if (ec != std::errc{} || ptr != id.data() + id.size() || row >= d.num_reviews())
        throw ParseError(line_no, "review ref out of range: '" + id + "'");
    return row;
}

struct Loader {
    const Dataset& d;
    ScoreState state;
    RunMeta meta;
    std::vector<char> seen_trust, seen_honesty, seen_rel;
    bool saw_meta = false;

    explicit Loader(const Dataset& dataset)
        : d(dataset),
          state(ScoreState::uniform(dataset, 0.0)),
          seen_trust(dataset.num_reviewers(), 0),
          seen_honesty(dataset.num_reviews(), 0),
          seen_rel(dataset.num_products(), 0) {}

    void row(const std::string& kind, const std::string& id, double value, std::size_t line_no) {
        if (!(value >= 0.0 && value <= 1.0))
            throw ParseError(line_no, "score value outside [0,1]: " + std::to_string(value));
        if (kind == "trust") {
            std::size_t i = d.reviewer_index(id);
            if (seen_trust[i]) throw ParseError(line_no, "duplicate trust row for " + id);
            seen_trust[i] = 1;
            state.trust[i] = value;
        } else if (kind == "honesty") {
            std::size_t row = review_row_from_ref(id, d, line_no);
            if (seen_honesty[row]) throw ParseError(line_no, "duplicate honesty row for " + id);
            seen_honesty[row] = 1;
            state.honesty[row] = value;
        } else if (kind == "reliability") {
            std::size_t i = d.product_index(id);
            if (seen_rel[i]) throw ParseError(line_no, "duplicate reliability row for " + id);
            seen_rel[i] = 1;
            state.reliability[i] = value;
        } else {
            throw ParseError(line_no, "unknown score kind: '" + kind + "'");
        }
    }

    std::pair<ScoreState, RunMeta> finish() {
        auto all = [](const std::vector<char>& v) {
            for (char c : v)
                if (!c) return false;
            return true;
        };
        if (!all(seen_trust) || !all(seen_honesty) || !all(seen_rel))
            throw IntegrityError("score file does not cover the dataset");
        if (!saw_meta) throw IntegrityError("score file has no meta record");
        return {std::move(state), meta};
    }
};

double parse_number(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(line_no, "bad number: '" + s + "'");
    return v;
}

std::pair<ScoreState, RunMeta> load_csv(const Dataset& d, std::istream& in) {
    Loader loader(d);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line == "kind,id,value") continue;
        std::stringstream ss(line);
        std::string kind, id, value;
        if (!std::getline(ss, kind, ',') || !std::getline(ss, id, ',') || !std::getline(ss, value))
            throw ParseError(line_no, "expected kind,id,value");
        if (kind == "meta") {
            loader.saw_meta = true;
            if (id == "iterations") loader.meta.iterations = static_cast<int>(parse_number(value, line_no));
            else if (id == "converged") loader.meta.converged = parse_number(value, line_no) != 0;
            else if (id == "final_delta") loader.meta.final_delta = parse_number(value, line_no);
            else if (id == "tolerance") loader.meta.tolerance = parse_number(value, line_no);
            else throw ParseError(line_no, "unknown meta key: '" + id + "'");
        } else {
            loader.row(kind, id, parse_number(value, line_no), line_no);
        }
    }
    return loader.finish();
}

std::pair<ScoreState, RunMeta> load_jsonl(const Dataset& d, std::istream& in) {
    Loader loader(d);
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
        try {
            std::string kind = j.at("kind").get<std::string>();
            if (kind == "meta") {
                loader.saw_meta = true;
                loader.meta.iterations = j.at("iterations").get<int>();
                loader.meta.converged = j.at("converged").get<bool>();
                loader.meta.final_delta = j.at("final_delta").get<double>();
                loader.meta.tolerance = j.at("tolerance").get<double>();
            } else {
                loader.row(kind, j.at("id").get<std::string>(), j.at("value").get<double>(),
                           line_no);
            }
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return loader.finish();
}

}  // namespace

std::string review_ref(std::size_t row) {
    return "v" + std::to_string(row);
}

void save_scores(const Dataset& d, const ScoreState& state, const RunMeta& meta,
                 const std::filesystem::path& path, FileFormat format) {
    if (!state.covers(d)) throw IntegrityError("score state does not cover the dataset");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    if (format == FileFormat::csv)
        save_csv(d, state, meta, out);
    else
        save_jsonl(d, state, meta, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::pair<ScoreState, RunMeta> load_scores(const Dataset& d, const std::filesystem::path& path,
                                           FileFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return format == FileFormat::csv ? load_csv(d, in) : load_jsonl(d, in);
}

}  // namespace rosd
