#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "glrr/clustering.hpp"
#include "glrr/dataset.hpp"
#include "glrr/solver.hpp"
#include "glrr/synth.hpp"

namespace glrr {

enum class DataSource { Synthetic, Dataset, Mnist };

struct MnistSource {
  std::filesystem::path dir;
  int groups_per_class = 40;
  int group_size = 20;
  std::uint64_t grouping_seed = 0;
};

struct PipelineConfig {
  DataSource source = DataSource::Synthetic;
  SyntheticSpec synth;
  std::filesystem::path dataset_path;
  DatasetFormat dataset_format = DatasetFormat::GmatDir;
  MnistSource mnist;

  int p = 10;
  int k = 3;
  SolverConfig solver;
  SpectralVariant spectral_variant = SpectralVariant::Njw;
  std::uint64_t spectral_seed = 0;

  std::filesystem::path out_dir = "runs";
  bool timestamped = true;

  /// Text the config was parsed from, copied into the run directory.
  std::string source_text;

  /// Throws Validation on p < 1, k < 2 or an invalid solver section.
  void validate() const;
};

/// Parses `key = value` lines. `[section]` headers prefix the following keys
/// ("[solver]" then "lambda = 0.3" is "solver.lambda"); `#` starts a comment;
/// values may be double-quoted. `preset = mnist | dyntex` sets the
/// experiment defaults (lambda 0.3 / 0.8) before explicit keys are applied.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Flat key/value view of the text, after section prefixing.
std::map<std::string, std::string> parse_key_values(const std::string& text);

}  // namespace glrr
