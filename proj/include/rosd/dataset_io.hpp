#pragma once

#include <filesystem>
#include <string>

#include "rosd/dataset.hpp"

namespace rosd {

enum class FileFormat { csv, jsonl };

/// "csv" / "jsonl", or by file extension (.csv, .jsonl, .ndjson). Defaults to
/// jsonl when the extension says nothing.
FileFormat format_from_name(const std::string& name);
FileFormat format_for_path(const std::filesystem::path& path);

/// CSV columns: reviewer_id,product_id,score[,seq][,is_spam]. A header row is
/// written on save and recognized on load (and drives column mapping);
/// headerless files are read positionally. CSV carries the review table only.
///
/// JSONL is full fidelity: review objects with the same keys, plus optional
/// {"product": id, "quality": q} and {"reviewer": id, "is_spammer": b} header
/// records. Reviews referencing undeclared ids register them implicitly.
///
/// Reviews without a seq column get per-reviewer seq from file row order.
Dataset load_dataset(const std::filesystem::path& path, FileFormat format);
Dataset load_dataset(const std::filesystem::path& path);  // format from extension

/// Canonical serialization: products and reviewers sorted by id, reviews in
/// collection order, shortest round-trip number formatting. Equal datasets
/// produce identical bytes.
void save_dataset(const Dataset& d, const std::filesystem::path& path, FileFormat format);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace rosd
