#pragma once

// Command-line front end: `simfuse train|score|eval`. Exit codes: 0 success,
// 1 data or model error, 2 usage error.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simfuse/corpus.hpp"
#include "simfuse/fusion.hpp"
#include "simfuse/pipeline.hpp"

namespace simfuse::cli {

struct CliConfig {
  std::optional<std::string> embedding_path;
  std::size_t n_max = kDefaultMaxTokens;
  std::uint64_t seed = 42;
  double learning_rate = 0.05;
  std::size_t epochs = 200;
  std::size_t batch_size = 16;
  LabelConvention label_convention = LabelConvention::OneIsSimilar;
  FusionMode fusion_mode = FusionMode::Learned;
  WeightingFactor weighting_factor = WeightingFactor::Accuracy;
};

// Applies one `key = value` setting. Throws ConfigError on an unknown key or
// an invalid value.
void apply_setting(CliConfig& config, const std::string& key, const std::string& value);

// Flat `key = value` lines; blank lines and '#' comments are skipped.
void apply_config_file(CliConfig& config, std::istream& in);

// Arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace simfuse::cli
