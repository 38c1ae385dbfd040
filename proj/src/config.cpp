#include "aoisec/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace aoisec {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text) {
  std::vector<T> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) continue;
    if (item.find(':') != std::string_view::npos) {
      const auto parts = split(item, ':');
      if (parts.size() != 3) throw std::invalid_argument("range must be start:stop:step");
      const double start = parse_number<double>(parts[0]);
      const double stop = parse_number<double>(parts[1]);
      const double step = parse_number<double>(parts[2]);
      if (!(step > 0.0) || stop < start) throw std::invalid_argument("empty or invalid range");
      const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
      for (long long k = 0; k <= count; ++k) {
        const double v = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
        out.push_back(static_cast<T>(v));
      }
    } else {
      out.push_back(parse_number<T>(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void flatten_json(const nlohmann::json& node, const std::string& prefix, ConfigMap& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  std::string value;
  if (node.is_array()) {
    for (const auto& item : node) {
      if (!value.empty()) value += ",";
      value += item.is_string() ? item.get<std::string>() : item.dump();
    }
  } else if (node.is_string()) {
    value = node.get<std::string>();
  } else {
    value = node.dump();
  }
  out[prefix] = value;
}

}  // namespace

ConfigMap parse_ini_config(const std::string& text) {
  // boost's INI reader only knows ';' comments; drop '#' lines as well.
  std::string cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (trim(line).starts_with('#')) continue;
    cleaned += line;
    cleaned += '\n';
  }
  boost::property_tree::ptree tree;
  std::istringstream in(cleaned);
  boost::property_tree::ini_parser::read_ini(in, tree);

  ConfigMap out;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      out[key] = std::string(trim(node.data()));
    } else {
      for (const auto& [sub, leaf] : node) out[key + "." + sub] = std::string(trim(leaf.data()));
    }
  }
  return out;
}

ConfigMap parse_json_config(const std::string& text) {
  ConfigMap out;
  flatten_json(nlohmann::json::parse(text), "", out);
  return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return path.extension() == ".json" ? parse_json_config(buffer.str())
                                     : parse_ini_config(buffer.str());
}

std::vector<double> parse_real_list(std::string_view text) { return parse_list<double>(text); }

std::vector<std::uint64_t> parse_count_list(std::string_view text) {
  return parse_list<std::uint64_t>(text);
}

std::vector<Method> parse_method_list(std::string_view text) {
  std::vector<Method> out;
  for (auto item : split(text, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

void apply_config(const ConfigMap& config, SweepSpec& spec) {
  for (const auto& [key, value] : config) {
    if (key == "experiment.kind" || key == "experiment") {
      spec.experiment = parse_experiment(trim(value));
    } else if (key == "experiment.convention" || key == "convention") {
      spec.convention = parse_convention(trim(value));
    } else if (key == "experiment.methods" || key == "methods") {
      spec.methods = parse_method_list(value);
    } else if (key == "experiment.seed" || key == "seed") {
      spec.seed = parse_number<std::uint64_t>(value);
    } else if (key == "experiment.out" || key == "out") {
      spec.output_path = std::string(trim(value));
    } else if (key == "experiment.workers" || key == "workers") {
      spec.workers = parse_number<unsigned>(value);
    } else if (key == "grid.p") {
      spec.p = parse_real_list(value);
    } else if (key == "grid.q") {
      spec.q = parse_real_list(value);
    } else if (key == "grid.p_tx") {
      spec.p_tx = parse_real_list(value);
    } else if (key == "grid.ratio") {
      spec.ratio = parse_real_list(value);
    } else if (key == "grid.eta_th") {
      spec.eta_th = parse_count_list(value);
    } else if (key == "simulation.horizon") {
      spec.sim.horizon = parse_number<std::uint64_t>(value);
    } else if (key == "simulation.burn_in") {
      spec.sim.burn_in = parse_number<std::uint64_t>(value);
    } else if (key == "simulation.replications") {
      spec.sim.replications = parse_number<std::uint32_t>(value);
    } else if (key == "simulation.confidence") {
      spec.sim.confidence = parse_number<double>(value);
    } else if (key == "oracle.truncation") {
      spec.oracle.min_truncation = parse_number<std::uint32_t>(value);
    } else if (key == "oracle.max_truncation") {
      spec.oracle.max_truncation = parse_number<std::uint32_t>(value);
    } else if (key == "oracle.max_tail_mass") {
      spec.oracle.max_tail_mass = parse_number<double>(value);
    } else if (key == "oracle.max_mean_error") {
      spec.oracle.max_mean_error = parse_number<double>(value);
    } else if (key == "oracle.tol") {
      spec.oracle.tol = parse_number<double>(value);
    } else if (key == "tolerance.probability") {
      spec.tolerances.probability = parse_number<double>(value);
    } else if (key == "tolerance.mean") {
      spec.tolerances.mean = parse_number<double>(value);
    } else if (key == "tolerance.grid_step") {
      spec.tolerances.grid_step = parse_number<double>(value);
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

}  // namespace aoisec
