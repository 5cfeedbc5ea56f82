#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nozzlelog/core/log_io.hpp"
#include "nozzlelog/core/types.hpp"
#include "nozzlelog/synth/params.hpp"

namespace nozzlelog::synth {

struct GeneratedHead {
  NozzleLog log;  // raw records, re-poll duplicates included
  LabelSet labels;
};

/// One head of a single archetype. Pure function of (params, head_seed).
/// The emitted log satisfies the archetype's signature property after
/// first-per-job downsampling (see tests/test_synth.cpp for the checks).
GeneratedHead generate_head(const PatternParams& params, std::uint64_t head_seed,
                            std::string head_id = "head");

/// Label-set target. Size-1 sets dispatch to the params entry; the only
/// supported multi-label combination is {Pattern1, Pattern2}.
GeneratedHead generate_head(const std::map<Label, PatternParams>& params, const LabelSet& target,
                            std::uint64_t head_seed, std::string head_id);

struct Dataset {
  std::vector<NozzleLog> logs;  // in head-id order
  Manifest manifest;
};

/// Every head of the spec. Head ids H0000, H0001, ...; per-head seed
/// mix_seed(spec.seed, head index), so worker count cannot change the output.
Dataset generate_dataset(const DatasetSpec& spec, unsigned workers = 1);

/// logs.tsv + manifest.csv under dir (created if missing).
void write_dataset(const Dataset& ds, const std::string& dir);

}  // namespace nozzlelog::synth
