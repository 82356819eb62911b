#pragma once

#include "sepals/csv.hpp"
#include "sepals/types.hpp"

#include <json.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepals::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kNumerical = 4 };

/// Invalid flag combination detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Splices the keys of a `--config <json>` file into the argument list as
/// flags, skipping any flag the user already passed explicitly. Returns the
/// arguments without the program name.
std::vector<std::string> expand_config(int argc, char** argv);

/// Command, resolved parameters, seed, version and UTC timestamp.
nlohmann::ordered_json make_manifest(const CLI::App& command, std::optional<std::uint64_t> seed);

void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

/// Reads a dataset CSV, mapping every failure to IoError.
csv::LabeledDataset load_dataset(const std::string& path, const std::optional<std::string>& y_col);

/// Divides each covariate column by its full-sample standard deviation;
/// constant columns are left as they are.
Dataset standardize_columns(const Dataset& data);

/// Parses a comma-separated list of reals.
Vector parse_vector(const std::string& text, Eigen::Index expected_size, const char* what);

/// Parses "a,b,c" or the inclusive ranges "lo:hi" and "lo:hi:step".
std::vector<std::size_t> parse_index_grid(const std::string& text);

nlohmann::ordered_json to_json(const Vector& v);

}  // namespace sepals::cli
