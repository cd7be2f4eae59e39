#include "glrr/config.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "glrr/io.hpp"

namespace glrr {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorKind::Validation, "config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  const long long s = to_int(key, v);
  if (s < 0) bad_value(key, v, "a non-negative integer");
  return static_cast<std::uint64_t>(s);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true or false");
}

}  // namespace

void PipelineConfig::validate() const {
  if (p < 1) throw Error(ErrorKind::Validation, "p must be >= 1");
  if (k < 2) throw Error(ErrorKind::Validation, "k must be >= 2");
  solver.validate();
  if (source == DataSource::Synthetic) {
    synth.validate();
    if (synth.p != p) throw Error(ErrorKind::Validation, "synth.p must equal p");
  }
  if (source == DataSource::Dataset && dataset_path.empty()) throw Error(ErrorKind::Validation, "dataset.path is required");
  if (source == DataSource::Mnist && mnist.dir.empty()) throw Error(ErrorKind::Validation, "mnist.dir is required");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::Validation, "config line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Validation, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw Error(ErrorKind::Validation, "config line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    out[key] = value;
  }
  return out;
}

PipelineConfig parse_config(const std::string& text) {
  auto kv = parse_key_values(text);
  PipelineConfig cfg;
  cfg.source_text = text;

  if (const auto it = kv.find("preset"); it != kv.end()) {
    if (it->second == "mnist") {
      cfg.solver.lambda = 0.3;
      cfg.p = 10;
    } else if (it->second == "dyntex") {
      cfg.solver.lambda = 0.8;
    } else {
      bad_value("preset", it->second, "mnist or dyntex");
    }
    kv.erase(it);
  }

  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"source",
       [&](auto& k, auto& v) {
         if (v == "synthetic") cfg.source = DataSource::Synthetic;
         else if (v == "dataset") cfg.source = DataSource::Dataset;
         else if (v == "mnist") cfg.source = DataSource::Mnist;
         else bad_value(k, v, "synthetic, dataset or mnist");
       }},
      {"p", [&](auto& k, auto& v) { cfg.p = static_cast<int>(to_int(k, v)); }},
      {"k", [&](auto& k, auto& v) { cfg.k = static_cast<int>(to_int(k, v)); }},
      {"lambda", [&](auto& k, auto& v) { cfg.solver.lambda = to_double(k, v); }},
      {"out", [&](auto&, auto& v) { cfg.out_dir = v; }},
      {"timestamped", [&](auto& k, auto& v) { cfg.timestamped = to_bool(k, v); }},
      {"dataset.path", [&](auto&, auto& v) { cfg.dataset_path = v; }},
      {"dataset.format", [&](auto&, auto& v) { cfg.dataset_format = parse_dataset_format(v); }},
      {"synth.k", [&](auto& k, auto& v) { cfg.synth.k = static_cast<int>(to_int(k, v)); }},
      {"synth.per_cluster", [&](auto& k, auto& v) { cfg.synth.per_cluster = static_cast<int>(to_int(k, v)); }},
      {"synth.d", [&](auto& k, auto& v) { cfg.synth.d = static_cast<int>(to_int(k, v)); }},
      {"synth.p", [&](auto& k, auto& v) { cfg.synth.p = static_cast<int>(to_int(k, v)); }},
      {"synth.noise", [&](auto& k, auto& v) { cfg.synth.noise = to_double(k, v); }},
      {"synth.seed", [&](auto& k, auto& v) { cfg.synth.seed = to_seed(k, v); }},
      {"mnist.dir", [&](auto&, auto& v) { cfg.mnist.dir = v; }},
      {"mnist.groups_per_class", [&](auto& k, auto& v) { cfg.mnist.groups_per_class = static_cast<int>(to_int(k, v)); }},
      {"mnist.group_size", [&](auto& k, auto& v) { cfg.mnist.group_size = static_cast<int>(to_int(k, v)); }},
      {"mnist.grouping_seed", [&](auto& k, auto& v) { cfg.mnist.grouping_seed = to_seed(k, v); }},
      {"solver.lambda", [&](auto& k, auto& v) { cfg.solver.lambda = to_double(k, v); }},
      {"solver.rho0", [&](auto& k, auto& v) { cfg.solver.rho0 = to_double(k, v); }},
      {"solver.beta0", [&](auto& k, auto& v) { cfg.solver.beta0 = to_double(k, v); }},
      {"solver.beta_max", [&](auto& k, auto& v) { cfg.solver.beta_max = to_double(k, v); }},
      {"solver.eps1", [&](auto& k, auto& v) { cfg.solver.eps1 = to_double(k, v); }},
      {"solver.eps2", [&](auto& k, auto& v) { cfg.solver.eps2 = to_double(k, v); }},
      {"solver.max_iters", [&](auto& k, auto& v) { cfg.solver.max_iters = static_cast<int>(to_int(k, v)); }},
      {"spectral.variant", [&](auto&, auto& v) { cfg.spectral_variant = parse_spectral_variant(v); }},
      {"spectral.seed", [&](auto& k, auto& v) { cfg.spectral_seed = to_seed(k, v); }},
  };

  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorKind::Validation, "unknown config key '" + key + "'");
    it->second(key, value);
  }
  // A synthetic run generates points of dimension p unless told otherwise.
  if (kv.count("synth.p") == 0) cfg.synth.p = cfg.p;
  if (kv.count("synth.k") == 0) cfg.synth.k = cfg.k;
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) { return parse_config(io::load_text(path)); }

}  // namespace glrr
