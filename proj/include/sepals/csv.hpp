#pragma once

#include "sepals/types.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sepals::csv {

/// Shortest-safe locale-independent rendering with 17 significant digits.
/// NaN renders as the empty string.
std::string format_real(double value);

/// Parses a real with '.' as decimal separator; throws DomainError.
double parse_real(std::string_view text);

/// Comma-separated reals, e.g. "1,0.5,-2".
std::vector<double> parse_real_list(std::string_view text);

struct LabeledDataset {
  Dataset data;
  std::vector<std::string> covariate_names;
  std::string response_name;
};

/// Reads a headered numeric CSV. The response is the last column, or the
/// column named `y_column` when given; the rest are covariates in file order.
/// Throws DomainError on malformed content.
LabeledDataset read_dataset(std::istream& in, const std::optional<std::string>& y_column = {});

/// Writes header x1,...,xp,y followed by one row per observation.
void write_dataset(std::ostream& out, const Dataset& data);

}  // namespace sepals::csv
