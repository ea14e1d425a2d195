#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvfcm/core.hpp"
#include "mvfcm/datagen.hpp"

namespace mvfcm {

/// Comma-delimited numeric table, one object per line; '#' lines are skipped.
/// Throws DataError with the offending line number on malformed input.
Matrix read_view_file(const std::filesystem::path& path);
Matrix parse_view_text(const std::string& text, const std::string& source = "<text>");

/// One integer >= 1 per line.
Labels read_label_file(const std::filesystem::path& path);
Labels parse_label_text(const std::string& text, const std::string& source = "<text>");

/// Throws DataError naming the view whose row count disagrees with view 1 (or with the labels).
MultiViewDataset load_multiview(std::span<const std::filesystem::path> view_paths,
                                const std::optional<std::filesystem::path>& label_path = std::nullopt);

void write_view_file(const std::filesystem::path& path, const Matrix& view);
void write_label_file(const std::filesystem::path& path, const Labels& labels);

/// Writes <prefix>_view<p>.csv for every view and <prefix>_labels.txt when labels exist.
std::vector<std::filesystem::path> write_dataset(const MultiViewDataset& data, const std::string& prefix);

/// Flat `key = value` file; '#' starts a comment line.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text, const std::string& source = "<text>");
KeyValues read_key_value_file(const std::filesystem::path& path);

/// Builds a SyntheticSpec from keys named after its fields. Unknown keys are a ConfigError.
SyntheticSpec synthetic_spec_from(const KeyValues& values);

std::vector<std::string> split_list(const std::string& value);

/// Typed value parsers for spec files; errors name the key.
std::uint64_t parse_uint_value(const std::string& key, const std::string& value);
double parse_real_value(const std::string& key, const std::string& value);
bool parse_bool_value(const std::string& key, const std::string& value);

}  // namespace mvfcm
