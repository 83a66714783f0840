#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "rosd/dataset_io.hpp"
#include "rosd/engine.hpp"

namespace rosd {

/// Convergence metadata attached to a ScoreState export.
struct RunMeta {
    int iterations = 0;
    bool converged = false;
    double final_delta = 0.0;
    double tolerance = 0.0;
};

/// Reviews have no id column in the dataset formats, so exports refer to them
/// as "v<row>" with row = 0-based position in the dataset's review collection.
std::string review_ref(std::size_t row);

/// Rows of (kind, id, value) with kind in {trust, honesty, reliability} plus
/// one meta record. Trust/reliability rows are sorted by id; honesty rows
/// follow dataset row order.
void save_scores(const Dataset& d, const ScoreState& state, const RunMeta& meta,
                 const std::filesystem::path& path, FileFormat format);

/// Inverse of save_scores; validates that the rows exactly cover d.
std::pair<ScoreState, RunMeta> load_scores(const Dataset& d, const std::filesystem::path& path,
                                           FileFormat format);

}  // namespace rosd
