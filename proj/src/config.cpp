#include "ftattn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ftattn {

std::string format_real(Real value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("bad value for " + key + ": '" + value + "' (expected true|false)");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number<int>(key, item));
  }
  return out;
}

std::string render_int_list(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string mode_name(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::Fixed: return "fixed";
    case ScenarioMode::Alternating: return "alternating";
    case ScenarioMode::Dynamic: return "dynamic";
  }
  return "fixed";
}

ScenarioMode parse_mode(const std::string& value) {
  if (value == "fixed") return ScenarioMode::Fixed;
  if (value == "alternating") return ScenarioMode::Alternating;
  if (value == "dynamic") return ScenarioMode::Dynamic;
  throw ConfigError("bad value for mode: '" + value + "' (expected fixed|alternating|dynamic)");
}

struct KeyHandler {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::map<std::string, KeyHandler>& schema() {
  static const std::map<std::string, KeyHandler> table = {
      {"n_agents",
       {[](ExperimentConfig& c, const std::string& v) {
          c.env.n_agents = parse_number<int>("n_agents", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.env.n_agents); }}},
      {"mode",
       {[](ExperimentConfig& c, const std::string& v) { c.env.mode = parse_mode(v); },
        [](const ExperimentConfig& c) { return mode_name(c.env.mode); }}},
      {"gifted_set",
       {[](ExperimentConfig& c, const std::string& v) {
          c.env.gifted_set = parse_int_list("gifted_set", v);
        },
        [](const ExperimentConfig& c) { return render_int_list(c.env.gifted_set); }}},
      {"arena_half_width",
       {[](ExperimentConfig& c, const std::string& v) {
          c.env.arena_half_width = parse_number<Real>("arena_half_width", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.env.arena_half_width); }}},
      {"dt",
       {[](ExperimentConfig& c, const std::string& v) { c.env.dt = parse_number<Real>("dt", v); },
        [](const ExperimentConfig& c) { return format_real(c.env.dt); }}},
      {"damping",
       {[](ExperimentConfig& c, const std::string& v) {
          c.env.damping = parse_number<Real>("damping", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.env.damping); }}},
      {"force_mag",
       {[](ExperimentConfig& c, const std::string& v) {
          c.env.force_mag = parse_number<Real>("force_mag", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.env.force_mag); }}},
      {"episode_len",
       {[](ExperimentConfig& c, const std::string& v) {
          c.env.episode_len = parse_number<int>("episode_len", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.env.episode_len); }}},
      {"noise_resample",
       {[](ExperimentConfig& c, const std::string& v) {
          if (v == "per-step")
            c.env.noise_resample = NoiseResample::PerStep;
          else if (v == "per-episode")
            c.env.noise_resample = NoiseResample::PerEpisode;
          else
            throw ConfigError("bad value for noise_resample: '" + v +
                              "' (expected per-step|per-episode)");
        },
        [](const ExperimentConfig& c) {
          return c.env.noise_resample == NoiseResample::PerStep ? std::string("per-step")
                                                                : std::string("per-episode");
        }}},
      {"variant",
       {[](ExperimentConfig& c, const std::string& v) { c.variant = parse_variant(v); },
        [](const ExperimentConfig& c) { return variant_name(c.variant); }}},
      {"out_dir",
       {[](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
        [](const ExperimentConfig& c) { return c.out_dir; }}},
      {"gamma",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.gamma = parse_number<Real>("gamma", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.train.gamma); }}},
      {"alpha_temp",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.alpha_temp = parse_number<Real>("alpha_temp", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.train.alpha_temp); }}},
      {"lr",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.lr = parse_number<Real>("lr", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.train.lr); }}},
      {"episodes",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.episodes = parse_number<long>("episodes", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.episodes); }}},
      {"update_period",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.update_period = parse_number<long>("update_period", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.update_period); }}},
      {"batch",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.batch = parse_number<long>("batch", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.batch); }}},
      {"min_fill",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.min_fill = parse_number<long>("min_fill", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.min_fill); }}},
      {"polyak",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.polyak = parse_number<Real>("polyak", v);
        },
        [](const ExperimentConfig& c) { return format_real(c.train.polyak); }}},
      {"gradient_steps",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.gradient_steps = parse_number<int>("gradient_steps", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.gradient_steps); }}},
      {"seed",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.seed = parse_number<std::uint64_t>("seed", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.seed); }}},
      {"buffer_capacity",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.buffer_capacity = parse_number<long>("buffer_capacity", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.buffer_capacity); }}},
      {"hidden",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.hidden = parse_number<int>("hidden", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.hidden); }}},
      {"heads",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.heads = parse_number<int>("heads", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.heads); }}},
      {"log_every",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.log_every = parse_number<long>("log_every", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.log_every); }}},
      {"checkpoint_every",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.checkpoint_every = parse_number<long>("checkpoint_every", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.checkpoint_every); }}},
      {"exact_target_expectation",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.exact_target_expectation = parse_bool("exact_target_expectation", v);
        },
        [](const ExperimentConfig& c) {
          return c.train.exact_target_expectation ? std::string("true") : std::string("false");
        }}},
      {"hard_target_update",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.hard_target_update = parse_bool("hard_target_update", v);
        },
        [](const ExperimentConfig& c) {
          return c.train.hard_target_update ? std::string("true") : std::string("false");
        }}},
      {"hard_update_period",
       {[](ExperimentConfig& c, const std::string& v) {
          c.train.hard_update_period = parse_number<long>("hard_update_period", v);
        },
        [](const ExperimentConfig& c) { return std::to_string(c.train.hard_update_period); }}},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  env.validate();
  train.validate();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : schema()) out.push_back(k);
    return out;  // std::map iterates sorted
  }();
  return keys;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = schema().find(key);
  if (it == schema().end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second.set(cfg, trim(value));
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  ExperimentConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  for (const auto& key : config_keys()) {
    std::string name = "FTATTN_";
    for (char ch : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* value = std::getenv(name.c_str())) apply_override(cfg, key, value);
  }
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& key : config_keys()) {
    out += key;
    out += " = ";
    out += schema().at(key).get(cfg);
    out += "\n";
  }
  return out;
}

}  // namespace ftattn
