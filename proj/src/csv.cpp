#include "sepals/csv.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace sepals::csv {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) {
    return {};
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto field : split(text)) out.push_back(parse_real(field));
  return out;
}

LabeledDataset read_dataset(std::istream& in, const std::optional<std::string>& y_column) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DomainError("empty CSV input");
  }
  std::vector<std::string> header;
  for (auto field : split(line)) header.emplace_back(trim(field));
  if (header.size() < 3) {
    throw DomainError("CSV needs at least two covariates and a response");
  }
  std::size_t y_index = header.size() - 1;
  if (y_column) {
    const auto it = std::find(header.begin(), header.end(), *y_column);
    if (it == header.end()) {
      throw DomainError("response column '" + *y_column + "' not found");
    }
    y_index = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw DomainError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_real(f));
    rows.push_back(std::move(row));
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  Matrix X(n, p);
  Vector Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    for (std::size_t f = 0; f < header.size(); ++f) {
      if (f == y_index) {
        Y[i] = rows[static_cast<std::size_t>(i)][f];
      } else {
        X(i, col++) = rows[static_cast<std::size_t>(i)][f];
      }
    }
  }
  std::vector<std::string> names;
  for (std::size_t f = 0; f < header.size(); ++f) {
    if (f != y_index) names.push_back(header[f]);
  }
  return LabeledDataset{Dataset(std::move(X), std::move(Y)), std::move(names), header[y_index]};
}

void write_dataset(std::ostream& out, const Dataset& data) {
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    out << 'x' << (j + 1) << ',';
  }
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      out << format_real(data.X()(i, j)) << ',';
    }
    out << format_real(data.Y()[i]) << '\n';
  }
}

}  // namespace sepals::csv
