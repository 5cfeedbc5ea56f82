#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>

#include "nozzlelog/core/types.hpp"

namespace nozzlelog {
class Config;
}

namespace nozzlelog::synth {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

enum class SpatialMode { Scattered, ContiguousBlock, EdgeRun, SparseBurst, Drift };

SpatialMode spatial_mode_from_name(std::string_view name);
const std::string& spatial_mode_name(SpatialMode m);

/// Knobs for one failure archetype. The defaults are generator contracts
/// calibrated so the archetype signatures hold on every emitted head; they
/// are not field measurements.
struct PatternParams {
  Label pattern = Label::Other;
  IntRange n_steps{60, 200};
  double onset = 0.2;               // fraction of lifetime
  IntRange intensity{25, 80};       // terminal failed-nozzle count / block or run length
  Eigen::Array<double, kNumChannels, 1> nfc_mix =
      Eigen::Array<double, kNumChannels, 1>::Constant(0.2);
  SpatialMode spatial_mode = SpatialMode::Scattered;
  double noise_rate = 0.004;        // fraction of cells eligible to flicker per step

  /// Throws ConfigError on zero-length step ranges, bad weights or onset.
  void validate() const;
};

/// Composition of a synthetic dataset plus the per-archetype knobs.
struct DatasetSpec {
  std::map<LabelSet, int> class_counts;
  std::uint64_t seed = 42;
  std::map<Label, PatternParams> params;

  /// 411 heads / 417 label rows: single-label classes of 121/69/30/26/23/136
  /// heads plus 6 dual Pattern1|Pattern2 heads.
  static DatasetSpec default_spec(std::uint64_t seed);

  int total_heads() const;
  int total_label_rows() const;
  /// Label occurrences per class across head label sets.
  std::array<int, kNumLabels> class_supports() const;

  void validate() const;
};

/// Overlay config keys onto the default spec. Accepted keys:
///   seed = 42
///   class_count.<LabelSet> = <n>      (any such key replaces ALL default counts)
///   params.<Pattern>.n_steps = 60:200
///   params.<Pattern>.onset = 0.2
///   params.<Pattern>.intensity = 25:80
///   params.<Pattern>.nfc_mix = 0.75,0.1,0.1,0,0.05
///   params.<Pattern>.spatial_mode = scattered
///   params.<Pattern>.noise_rate = 0.004
/// Unknown keys are ConfigErrors.
DatasetSpec dataset_spec_from_config(const Config& cfg);

}  // namespace nozzlelog::synth
