#include "cli_common.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace sepals::cli {

namespace {

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string scalar_to_arg(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return csv::format_real(value.get<double>());
  return value.dump();
}

std::string iso8601_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

}  // namespace

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file argument");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!config_path) return args;

  std::ifstream in(*config_path);
  if (!in) throw IoError("cannot open config file " + *config_path);
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("invalid JSON in " + *config_path + ": " + e.what());
  }
  if (!config.is_object()) throw UsageError("config file must hold a JSON object");

  for (const auto& [key, value] : config.items()) {
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += scalar_to_arg(item);
      }
      args.push_back(flag);
      args.push_back(joined);
    } else if (!value.is_null()) {
      args.push_back(flag);
      args.push_back(scalar_to_arg(value));
    }
  }
  return args;
}

namespace {

nlohmann::ordered_json typed_value(const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc() && ptr == end && !text.empty()) {
    std::uint64_t whole = 0;
    const auto [iptr, iec] = std::from_chars(text.data(), end, whole);
    if (iec == std::errc() && iptr == end) return whole;
    return value;
  }
  return text;
}

}  // namespace

nlohmann::ordered_json make_manifest(const CLI::App& command, std::optional<std::uint64_t> seed) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : command.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->get_expected_max() == 0) {
      params[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      params[name] = opt->results().size() == 1 ? typed_value(opt->results().front())
                                                 : nlohmann::ordered_json(opt->results());
    } else if (!opt->get_default_str().empty()) {
      params[name] = typed_value(opt->get_default_str());
    } else {
      params[name] = nullptr;
    }
  }
  nlohmann::ordered_json manifest;
  manifest["command"] = command.get_name();
  manifest["params"] = std::move(params);
  manifest["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  manifest["version"] = SEPALS_VERSION;
  manifest["timestamp"] = iso8601_now();
  return manifest;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

csv::LabeledDataset load_dataset(const std::string& path, const std::optional<std::string>& y_col) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open data file " + path);
  try {
    return csv::read_dataset(in, y_col);
  } catch (const DomainError& e) {
    throw IoError(path + ": " + e.what());
  }
}

Dataset standardize_columns(const Dataset& data) {
  Matrix X = data.X();
  const double n = static_cast<double>(data.n());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.col(j).mean();
    const double sd = std::sqrt((X.col(j).array() - mean).square().sum() / (n - 1.0));
    if (sd > 0.0) X.col(j) /= sd;
  }
  return Dataset(std::move(X), data.Y());
}

Vector parse_vector(const std::string& text, Eigen::Index expected_size, const char* what) {
  std::vector<double> values;
  try {
    values = csv::parse_real_list(text);
  } catch (const DomainError& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
  if (static_cast<Eigen::Index>(values.size()) != expected_size) {
    throw UsageError(std::string(what) + " needs " + std::to_string(expected_size) +
                     " values, got " + std::to_string(values.size()));
  }
  return Eigen::Map<const Vector>(values.data(), expected_size);
}

std::vector<std::size_t> parse_index_grid(const std::string& text) {
  auto to_index = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad integer '" + s + "' in grid '" + text + "'");
    }
    if (pos != s.size() || v < 0) throw UsageError("bad integer '" + s + "' in grid '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("bad range '" + text + "'");
    const std::size_t lo = to_index(parts[0]);
    const std::size_t hi = to_index(parts[1]);
    const std::size_t step = parts.size() == 3 ? to_index(parts[2]) : 1;
    if (step == 0 || lo > hi) throw UsageError("bad range '" + text + "'");
    for (std::size_t k = lo; k <= hi; k += step) out.push_back(k);
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(to_index(part));
  }
  if (out.empty()) throw UsageError("empty grid '" + text + "'");
  return out;
}

nlohmann::ordered_json to_json(const Vector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

}  // namespace sepals::cli
