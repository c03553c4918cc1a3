#pragma once

#include <string>
#include <vector>

#include "ftattn/env.hpp"
#include "ftattn/sac.hpp"
#include "ftattn/variants.hpp"

namespace ftattn {

/// Full run description: environment, training, variant, output root.
/// Loadable from a flat key=value file; every key is schema-checked and
/// unknown keys are rejected.
struct ExperimentConfig {
  EnvConfig env;
  TrainingConfig train;
  VariantKind variant = VariantKind::FTAttn;
  std::string out_dir = "runs/latest";

  void validate() const;
};

/// All recognized keys, sorted.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual form; throws ConfigError on unknown
/// keys or unparsable values.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines; '#' starts a comment. Throws ConfigError
/// when the file is missing or malformed.
ExperimentConfig load_config_file(const std::string& path);

/// Applies FTATTN_<UPPERCASE_KEY> environment variables on top of cfg.
void apply_env_overrides(ExperimentConfig& cfg);

/// Canonical snapshot: every key, sorted, one `key = value` per line.
/// Values render in shortest round-trip form, so re-loading the snapshot
/// reproduces the configuration exactly.
std::string render_config(const ExperimentConfig& cfg);

/// Shortest decimal form that parses back to the same double.
std::string format_real(Real value);

}  // namespace ftattn
