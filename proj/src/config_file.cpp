#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <sstream>

#include "rugged/errors.hpp"
#include "rugged/harness.hpp"

namespace rugged {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& text) {
  std::size_t used = 0;
  if (text.empty() || text[0] == '-') throw std::invalid_argument("not an unsigned integer");
  const auto v = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::vector<std::size_t> parse_n_value_list(const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(value)) {
    if (item.find(':') != std::string::npos) {
      std::vector<std::uint64_t> parts;
      std::istringstream ss(item);
      std::string part;
      while (std::getline(ss, part, ':')) parts.push_back(parse_uint(trim(part)));
      if (parts.size() != 3 || parts[2] == 0 || parts[0] > parts[1]) {
        throw std::invalid_argument("range must be start:stop:step");
      }
      for (auto n = parts[0]; n <= parts[1]; n += parts[2]) out.push_back(n);
    } else {
      out.push_back(parse_uint(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("expected true|false");
}

}  // namespace

std::vector<Algorithm> parse_algorithm_list(const std::string& value) {
  std::vector<Algorithm> out;
  for (const auto& a : split_list(value)) out.push_back(parse_algorithm(a));
  if (out.empty()) throw ConfigError("empty algorithm list");
  return out;
}

std::vector<std::size_t> parse_n_values(const std::string& value) {
  try {
    return parse_n_value_list(value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid n values '" + value + "': " + e.what());
  } catch (const std::out_of_range&) {
    throw ConfigError("invalid n values '" + value + "'");
  }
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::vector<std::string> noise_kinds = {"normal"};
  double variance = 5.0;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("config key '" + key + "' given twice (line " + std::to_string(line_no) + ")");
    }
    try {
      if (key == "algorithms") {
        c.algorithms = parse_algorithm_list(value);
      } else if (key == "n_values") {
        c.n_values = parse_n_value_list(value);
      } else if (key == "repetitions") {
        c.repetitions = parse_uint(value);
      } else if (key == "budget") {
        c.budget_rule = value;
      } else if (key == "noise") {
        noise_kinds = split_list(value);
      } else if (key == "variance") {
        variance = parse_real(value);
      } else if (key == "K") {
        c.k_rule = value;
      } else if (key == "seed") {
        c.master_seed = parse_uint(value);
      } else if (key == "statistic") {
        c.statistic = parse_statistic(value);
      } else if (key == "threads") {
        c.threads = static_cast<unsigned>(parse_uint(value));
      } else if (key == "record_wall_time") {
        c.record_wall_time = parse_bool(value);
      } else {
        throw ConfigError("unknown config key '" + key + "' (line " + std::to_string(line_no) + ")");
      }
    } catch (const ConfigError& e) {
      if (std::string(e.what()).find("'" + key + "'") != std::string::npos) throw;
      throw ConfigError("invalid value for config key '" + key + "' (line " + std::to_string(line_no) +
                        "): " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError("invalid value for config key '" + key + "' (line " + std::to_string(line_no) +
                        "): " + e.what());
    }
  }
  c.noises.clear();
  for (const auto& kind : noise_kinds) c.noises.push_back({kind, variance});
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

}  // namespace rugged
