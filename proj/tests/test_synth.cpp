#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <set>
#include <string>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/errors.hpp"
#include "nozzlelog/features/kernels.hpp"
#include "nozzlelog/synth/generator.hpp"
#include "nozzlelog/synth/params.hpp"
#include "nozzlelog/util/config.hpp"

using namespace nozzlelog;
using namespace nozzlelog::synth;

namespace {

/// Downsampled per-channel final counts, the quantities the archetype
/// signatures are stated over.
Eigen::Array<int, kNumChannels, 1> final_counts(const NozzleLog& raw) {
  const NozzleLog ds = downsample_first_per_job(raw.records);
  return ds.terminal_grid().channel_counts();
}

}  // namespace

TEST_CASE("default spec composition is frozen") {
  const DatasetSpec spec = DatasetSpec::default_spec(42);
  CHECK(spec.total_heads() == 411);
  CHECK(spec.total_label_rows() == 417);
  const auto supports = spec.class_supports();
  CHECK(supports[0] == 127);  // Pattern1: 121 single + 6 dual
  CHECK(supports[1] == 75);   // Pattern2: 69 single + 6 dual
  CHECK(supports[2] == 30);
  CHECK(supports[3] == 26);
  CHECK(supports[4] == 23);
  CHECK(supports[5] == 136);
}

TEST_CASE("generate_head is a pure function of params and seed") {
  const DatasetSpec spec = DatasetSpec::default_spec(1);
  const auto& params = spec.params.at(Label::Pattern1);
  const GeneratedHead a = generate_head(params, 77, "X");
  const GeneratedHead b = generate_head(params, 77, "X");
  CHECK(a.log == b.log);
  const GeneratedHead c = generate_head(params, 78, "X");
  CHECK_FALSE(a.log == c.log);
}

TEST_CASE("generated logs are structurally valid") {
  const DatasetSpec spec = DatasetSpec::default_spec(5);
  for (const auto& [label, params] : spec.params) {
    const GeneratedHead head = generate_head(params, 1234, "S");
    REQUIRE_FALSE(head.log.empty());
    std::uint64_t last_t = 0;
    bool repoll = false;
    std::set<std::uint64_t> jobs;
    for (std::size_t i = 0; i < head.log.records.size(); ++i) {
      const LogRecord& rec = head.log.records[i];
      CHECK(rec.head_id == "S");
      if (i > 0) {
        CHECK(rec.t > last_t);
        repoll = repoll || rec.job_id == head.log.records[i - 1].job_id;
      }
      last_t = rec.t;
      jobs.insert(rec.job_id);
    }
    CHECK(jobs.size() < head.log.records.size());  // re-poll duplicates exist
    CHECK(repoll);
  }
}

TEST_CASE("archetype signatures hold on sampled heads") {
  const DatasetSpec spec = DatasetSpec::default_spec(31);

  for (std::uint64_t s = 0; s < 8; ++s) {
    // Pattern1: dominant NF1 mass, substantial terminal count.
    auto h1 = generate_head(spec.params.at(Label::Pattern1), 100 + s, "p1");
    const auto c1 = final_counts(h1.log);
    CHECK(c1[0] >= 20);
    CHECK(c1[0] >= c1.maxCoeff());

    // Pattern2: an abrupt NF2 jump of at least 30 nozzles in one step.
    auto h2 = generate_head(spec.params.at(Label::Pattern2), 200 + s, "p2");
    const NozzleLog ds2 = downsample_first_per_job(h2.log.records);
    const CountSeries cs2 = to_count_series(ds2);
    CHECK(features::step_features(cs2.channel(1)).max_step >= 30.0);

    // Pattern3: NF3 onset in the last fifth of the series.
    auto h3 = generate_head(spec.params.at(Label::Pattern3), 300 + s, "p3");
    const NozzleLog ds3 = downsample_first_per_job(h3.log.records);
    const CountSeries cs3 = to_count_series(ds3);
    CHECK(features::first_nonzero_fraction(cs3.channel(2)) >= 0.8);

    // Pattern4: a contiguous NF4 run anchored at a row edge.
    auto h4 = generate_head(spec.params.at(Label::Pattern4), 400 + s, "p4");
    const NozzleLog ds4 = downsample_first_per_job(h4.log.records);
    CHECK(features::nf4_edge_run(ds4.terminal_grid()) >= 10.0);

    // Dual heads satisfy both parents' signatures.
    LabelSet dual;
    dual.add(Label::Pattern1);
    dual.add(Label::Pattern2);
    auto hd = generate_head(spec.params, dual, 500 + s, "dual");
    CHECK(hd.labels == dual);
    const auto cd = final_counts(hd.log);
    CHECK(cd[0] >= 20);
    const NozzleLog dsd = downsample_first_per_job(hd.log.records);
    const CountSeries csd = to_count_series(dsd);
    CHECK(features::step_features(csd.channel(1)).max_step >= 30.0);
  }
}

TEST_CASE("generate_dataset is worker-count independent and ordered") {
  DatasetSpec spec = DatasetSpec::default_spec(9);
  spec.class_counts.clear();
  spec.class_counts[LabelSet(Label::Pattern1)] = 6;
  spec.class_counts[LabelSet(Label::Other)] = 5;

  const Dataset a = generate_dataset(spec, 1);
  const Dataset b = generate_dataset(spec, 4);
  REQUIRE(a.logs.size() == 11);
  CHECK(a.manifest == b.manifest);
  REQUIRE(a.logs.size() == b.logs.size());
  for (std::size_t i = 0; i < a.logs.size(); ++i) CHECK(a.logs[i] == b.logs[i]);

  CHECK(a.logs.front().head_id == "H0000");
  CHECK(a.logs.back().head_id == "H0010");
  for (const auto& log : a.logs) CHECK(a.manifest.count(log.head_id) == 1);
}

TEST_CASE("spec validation rejects bad knobs") {
  DatasetSpec spec = DatasetSpec::default_spec(1);
  spec.class_counts[LabelSet(Label::Pattern1)] = -1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);

  PatternParams p = DatasetSpec::default_spec(1).params.at(Label::Pattern1);
  p.onset = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = DatasetSpec::default_spec(1).params.at(Label::Pattern1);
  p.n_steps = {50, 10};
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("config overlay replaces counts and knobs") {
  const Config cfg = Config::from_string(
      "seed = 7\n"
      "class_count.Pattern1 = 3\n"
      "class_count.Pattern1|Pattern2 = 2\n"
      "params.Pattern1.onset = 0.1\n"
      "params.Pattern1.intensity = 30:40\n");
  const DatasetSpec spec = dataset_spec_from_config(cfg);
  CHECK(spec.seed == 7);
  CHECK(spec.total_heads() == 5);
  CHECK(spec.total_label_rows() == 7);
  CHECK(spec.params.at(Label::Pattern1).onset == 0.1);
  CHECK(spec.params.at(Label::Pattern1).intensity.lo == 30);
  CHECK(spec.params.at(Label::Pattern2).onset ==
        DatasetSpec::default_spec(7).params.at(Label::Pattern2).onset);

  CHECK_THROWS_AS(dataset_spec_from_config(Config::from_string("nope = 1\n")), ConfigError);
  CHECK_THROWS_AS(dataset_spec_from_config(Config::from_string("params.Pattern1.onset = x\n")),
                  Error);
}

TEST_CASE("unsupported dual combinations are rejected") {
  const DatasetSpec spec = DatasetSpec::default_spec(1);
  LabelSet bad;
  bad.add(Label::Pattern3);
  bad.add(Label::Pattern4);
  CHECK_THROWS_AS(generate_head(spec.params, bad, 1, "x"), GenerationError);
}
