#include "nozzlelog/synth/params.hpp"

#include <cmath>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/config.hpp"
#include "nozzlelog/util/text.hpp"

namespace nozzlelog::synth {

SpatialMode spatial_mode_from_name(std::string_view name) {
  if (name == "scattered") return SpatialMode::Scattered;
  if (name == "contiguous_block") return SpatialMode::ContiguousBlock;
  if (name == "edge_run") return SpatialMode::EdgeRun;
  if (name == "sparse_burst") return SpatialMode::SparseBurst;
  if (name == "drift") return SpatialMode::Drift;
  throw ConfigError("unknown spatial mode: '" + std::string(name) + "'");
}

const std::string& spatial_mode_name(SpatialMode m) {
  static const std::array<std::string, 5> names = {"scattered", "contiguous_block", "edge_run",
                                                   "sparse_burst", "drift"};
  return names[static_cast<std::size_t>(m)];
}

void PatternParams::validate() const {
  if (n_steps.lo <= 0 || n_steps.hi < n_steps.lo)
    throw ConfigError(label_name(pattern) + ": step range must be non-empty and positive");
  if (intensity.lo <= 0 || intensity.hi < intensity.lo)
    throw ConfigError(label_name(pattern) + ": intensity range must be non-empty and positive");
  if (onset < 0.0 || onset > 1.0)
    throw ConfigError(label_name(pattern) + ": onset must lie in [0, 1]");
  if ((nfc_mix < 0.0).any())
    throw ConfigError(label_name(pattern) + ": nfc_mix weights must be non-negative");
  if (std::abs(nfc_mix.sum() - 1.0) > 1e-9)
    throw ConfigError(label_name(pattern) + ": nfc_mix weights must sum to 1");
  if (noise_rate < 0.0 || noise_rate > 0.05)
    throw ConfigError(label_name(pattern) + ": noise_rate must lie in [0, 0.05]");
}

namespace {

PatternParams make_params(Label pattern, IntRange steps, double onset, IntRange intensity,
                          std::array<double, kNumChannels> mix, SpatialMode mode,
                          double noise_rate) {
  PatternParams p;
  p.pattern = pattern;
  p.n_steps = steps;
  p.onset = onset;
  p.intensity = intensity;
  for (int k = 0; k < kNumChannels; ++k) p.nfc_mix[k] = mix[static_cast<std::size_t>(k)];
  p.spatial_mode = mode;
  p.noise_rate = noise_rate;
  return p;
}

}  // namespace

DatasetSpec DatasetSpec::default_spec(std::uint64_t seed) {
  DatasetSpec spec;
  spec.seed = seed;

  spec.class_counts[LabelSet(Label::Pattern1)] = 121;
  spec.class_counts[LabelSet(Label::Pattern2)] = 69;
  LabelSet dual(Label::Pattern1);
  dual.add(Label::Pattern2);
  spec.class_counts[dual] = 6;
  spec.class_counts[LabelSet(Label::Pattern3)] = 30;
  spec.class_counts[LabelSet(Label::Pattern4)] = 26;
  spec.class_counts[LabelSet(Label::Pattern5)] = 23;
  spec.class_counts[LabelSet(Label::Other)] = 136;

  spec.params[Label::Pattern1] =
      make_params(Label::Pattern1, {60, 200}, 0.20, {25, 80},
                  {0.75, 0.10, 0.10, 0.00, 0.05}, SpatialMode::Scattered, 0.004);
  spec.params[Label::Pattern2] =
      make_params(Label::Pattern2, {60, 200}, 0.55, {35, 64},
                  {0.10, 0.90, 0.00, 0.00, 0.00}, SpatialMode::ContiguousBlock, 0.004);
  spec.params[Label::Pattern3] =
      make_params(Label::Pattern3, {60, 200}, 0.95, {5, 25},
                  {0.20, 0.00, 0.60, 0.00, 0.20}, SpatialMode::SparseBurst, 0.0);
  spec.params[Label::Pattern4] =
      make_params(Label::Pattern4, {60, 200}, 0.50, {12, 40},
                  {0.20, 0.20, 0.00, 0.60, 0.00}, SpatialMode::EdgeRun, 0.004);
  spec.params[Label::Pattern5] =
      make_params(Label::Pattern5, {60, 200}, 0.15, {12, 48},
                  {0.20, 0.00, 0.25, 0.00, 0.55}, SpatialMode::Drift, 0.004);
  spec.params[Label::Other] =
      make_params(Label::Other, {60, 200}, 0.40, {3, 7},
                  {0.20, 0.20, 0.20, 0.20, 0.20}, SpatialMode::Scattered, 0.004);
  return spec;
}

int DatasetSpec::total_heads() const {
  int total = 0;
  for (const auto& [_, count] : class_counts) total += count;
  return total;
}

int DatasetSpec::total_label_rows() const {
  int total = 0;
  for (const auto& [labels, count] : class_counts) total += labels.size() * count;
  return total;
}

std::array<int, kNumLabels> DatasetSpec::class_supports() const {
  std::array<int, kNumLabels> supports{};
  for (const auto& [labels, count] : class_counts) {
    for (Label l : labels.labels()) supports[static_cast<std::size_t>(l)] += count;
  }
  return supports;
}

void DatasetSpec::validate() const {
  if (class_counts.empty()) throw ConfigError("dataset spec has no classes");
  for (const auto& [labels, count] : class_counts) {
    labels.validate_canonical("dataset class");
    if (count <= 0) throw ConfigError("class count must be positive for " + labels.to_string());
    for (Label l : labels.labels()) {
      if (!params.count(l)) throw ConfigError("missing pattern params for " + label_name(l));
    }
  }
  for (const auto& [_, p] : params) p.validate();
}

namespace {

IntRange parse_range(const std::string& key, const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2)
    throw ConfigError("key '" + key + "': expected lo:hi, got '" + text + "'");
  IntRange r;
  try {
    r.lo = static_cast<int>(parse_int(trim(parts[0])));
    r.hi = static_cast<int>(parse_int(trim(parts[1])));
  } catch (const Error& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
  return r;
}

Eigen::Array<double, kNumChannels, 1> parse_mix(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != kNumChannels)
    throw ConfigError("key '" + key + "': expected " + std::to_string(kNumChannels) + " weights");
  Eigen::Array<double, kNumChannels, 1> mix;
  for (int k = 0; k < kNumChannels; ++k) {
    try {
      mix[k] = parse_double(trim(parts[static_cast<std::size_t>(k)]));
    } catch (const Error& e) {
      throw ConfigError("key '" + key + "': " + e.what());
    }
  }
  return mix;
}

}  // namespace

DatasetSpec dataset_spec_from_config(const Config& cfg) {
  DatasetSpec spec = DatasetSpec::default_spec(cfg.has("seed") ? cfg.get_u64("seed") : 42);

  bool counts_replaced = false;
  for (const auto& [key, value] : cfg.entries()) {
    if (key == "seed") continue;
    if (key.rfind("class_count.", 0) == 0) {
      if (!counts_replaced) {
        spec.class_counts.clear();
        counts_replaced = true;
      }
      LabelSet labels;
      try {
        labels = LabelSet::parse(key.substr(12));
      } catch (const Error& e) {
        throw ConfigError("key '" + key + "': " + e.what());
      }
      spec.class_counts[labels] = static_cast<int>(cfg.get_int(key));
      continue;
    }
    if (key.rfind("params.", 0) == 0) {
      const auto parts = split(key, '.');
      if (parts.size() != 3) throw ConfigError("unknown config key '" + key + "'");
      Label pattern;
      try {
        pattern = label_from_name(parts[1]);
      } catch (const Error& e) {
        throw ConfigError("key '" + key + "': " + e.what());
      }
      PatternParams& p = spec.params[pattern];
      p.pattern = pattern;
      const std::string& field = parts[2];
      if (field == "n_steps") p.n_steps = parse_range(key, value);
      else if (field == "onset") p.onset = cfg.get_double(key);
      else if (field == "intensity") p.intensity = parse_range(key, value);
      else if (field == "nfc_mix") p.nfc_mix = parse_mix(key, value);
      else if (field == "spatial_mode") p.spatial_mode = spatial_mode_from_name(value);
      else if (field == "noise_rate") p.noise_rate = cfg.get_double(key);
      else throw ConfigError("unknown config key '" + key + "'");
      continue;
    }
    throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    spec.validate();
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace nozzlelog::synth
