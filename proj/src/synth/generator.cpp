#include "nozzlelog/synth/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "nozzlelog/errors.hpp"
#include "nozzlelog/util/fsio.hpp"
#include "nozzlelog/util/parallel.hpp"
#include "nozzlelog/util/rng.hpp"

// Archetype mechanics. Every numeric constant below is a generator contract:
// together they guarantee the per-class signature properties (and their
// absence on every other class) on each emitted head, noise included. The
// margins are deliberately integer-safe — e.g. scatter channels cap at 17
// structural cells so that even with both noise flickers parked in the same
// channel a non-Pattern1 head stays below the 20-cell Pattern1 threshold.

namespace nozzlelog::synth {

namespace {

constexpr int kMaxScatterRun = 5;    // same-state same-row run cap for scattered cells
constexpr int kEdgeGuardCols = 12;   // NF4 keep-out from both edges unless the head owns an edge run
constexpr int kChannelCap = 17;      // structural scatter cap per channel (17 + 2 flickers < 20)
constexpr int kSpurtCells = 8;       // Pattern1 one-step growth spurt (> 5-jump with noise slack)
constexpr double kBackgroundOnset = 0.15;  // early scatter on block heads
constexpr double kDupProb = 0.25;    // chance of a same-job re-poll record

NfcState channel_state(int k) { return static_cast<NfcState>(k + 1); }

int onset_step(double onset, int n) {
  const int s = static_cast<int>(std::llround(onset * (n - 1)));
  return std::clamp(s, 0, n - 1);
}

int argmax_weight(const Eigen::Array<double, kNumChannels, 1>& mix) {
  int best = 0;
  for (int k = 1; k < kNumChannels; ++k)
    if (mix[k] > mix[best]) best = k;
  return best;
}

NfcState sample_state(const Eigen::Array<double, kNumChannels, 1>& mix, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  int last = 0;
  for (int k = 0; k < kNumChannels; ++k) {
    if (mix[k] <= 0.0) continue;
    acc += mix[k];
    last = k;
    if (u < acc) return channel_state(k);
  }
  return channel_state(last);
}

/// cells-per-step schedule: `count` placements spread over [from, to], first
/// one at `from` (Bresenham spacing), never more than max_per_step per step.
std::vector<int> spread_schedule(int n, int count, int from, int to, int max_per_step) {
  std::vector<int> sched(static_cast<std::size_t>(n), 0);
  if (count <= 0) return sched;
  if (from < 0 || to >= n || from > to) throw GenerationError("schedule window out of range");
  const int steps = to - from + 1;
  const int base = count / steps;
  const int rem = count % steps;
  for (int i = 0; i < steps; ++i) {
    const int extra = (static_cast<long long>(i) * rem % steps) < rem ? 1 : 0;
    const int c = base + extra;
    if (c > max_per_step)
      throw GenerationError("schedule needs " + std::to_string(c) + " cells per step, cap is " +
                            std::to_string(max_per_step));
    sched[static_cast<std::size_t>(from + i)] = c;
  }
  return sched;
}

/// Structural cells per channel: llround(mix*total) capped, rounding drift
/// pushed onto the heaviest channels with headroom.
std::array<int, kNumChannels> allocate_counts(int total,
                                              const Eigen::Array<double, kNumChannels, 1>& mix,
                                              int cap) {
  std::array<int, kNumChannels> out{};
  int assigned = 0;
  for (int k = 0; k < kNumChannels; ++k) {
    out[k] = mix[k] > 0.0 ? std::min(cap, static_cast<int>(std::llround(mix[k] * total))) : 0;
    assigned += out[k];
  }
  std::array<int, kNumChannels> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mix[a] > mix[b]; });
  int drift = total - assigned;
  for (int k : order) {
    while (drift > 0 && mix[k] > 0.0 && out[k] < cap) {
      ++out[k];
      --drift;
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    while (drift < 0 && out[*it] > 0) {
      --out[*it];
      ++drift;
    }
  }
  if (drift != 0) throw GenerationError("cannot allocate " + std::to_string(total) + " cells");
  return out;
}

// ---------------------------------------------------------------------------

/// Grid + record state for one head. Owns every legality rule: scatter cells
/// keep same-state runs <= 5, NF4 stays off the edges unless the head owns an
/// edge run, structural counts respect per-channel caps, noise flickers (<= 2,
/// one-step lifetime) only ever clear their own cells.
class HeadSim {
public:
  HeadSim(std::string head_id, const Eigen::Array<double, kNumChannels, 1>& noise_mix,
          double noise_rate, bool allow_nf4_edges)
      : head_id_(std::move(head_id)),
        noise_mix_(noise_mix),
        spawn_p_(std::min(1.0, noise_rate * kGridCells / 2.0)),
        allow_nf4_edges_(allow_nf4_edges) {
    caps_.fill(kChannelCap);
    reserved_.fill(false);
    noise_slots_.fill(-1);
  }

  void set_cap(int channel, int cap) { caps_[static_cast<std::size_t>(channel)] = cap; }
  void set_noise_active(bool on) { noise_active_ = on; }

  void reserve(int row, int col) { reserved_[cell_index(row, col)] = true; }

  bool can_place(int row, int col, NfcState s, bool structural) const {
    if (grid_.at(row, col) != NfcState::Empty) return false;
    if (reserved_[cell_index(row, col)]) return false;
    const int k = static_cast<int>(s) - 1;
    if (structural && struct_count_[static_cast<std::size_t>(k)] >= caps_[static_cast<std::size_t>(k)])
      return false;
    if (s == NfcState::NF4 && !allow_nf4_edges_ &&
        (col < kEdgeGuardCols || col >= kGridCols - kEdgeGuardCols))
      return false;
    return run_after(row, col, s) <= kMaxScatterRun;
  }

  /// Random legal cell for a scattered structural placement.
  int place_scatter(NfcState s, Rng& rng) {
    for (int tries = 0; tries < 200; ++tries) {
      const int row = static_cast<int>(rng.uniform_int(0, kGridRows - 1));
      const int col = static_cast<int>(rng.uniform_int(0, kGridCols - 1));
      if (can_place(row, col, s, true)) return place_structural(row, col, s);
    }
    for (int i = 0; i < kGridCells; ++i) {  // deterministic fallback sweep
      if (can_place(i / kGridCols, i % kGridCols, s, true))
        return place_structural(i / kGridCols, i % kGridCols, s);
    }
    throw GenerationError(head_id_ + ": no legal cell left for state " +
                          std::to_string(static_cast<int>(s)));
  }

  /// Pre-reserved structural cell (contiguous blocks, edge runs); bypasses
  /// the scatter legality rules — the caller owns the geometry.
  void place_reserved(int row, int col, NfcState s) {
    if (grid_.at(row, col) != NfcState::Empty)
      throw GenerationError(head_id_ + ": reserved cell already occupied");
    grid_.set(row, col, s);
    ++struct_count_[static_cast<std::size_t>(static_cast<int>(s) - 1)];
  }

  void clear_structural(int cell) {
    const NfcState s = grid_.cell(cell);
    if (s == NfcState::Empty) throw GenerationError(head_id_ + ": clearing an empty cell");
    grid_.set_cell(cell, NfcState::Empty);
    --struct_count_[static_cast<std::size_t>(static_cast<int>(s) - 1)];
  }

  /// Noise toggle + snapshot. Call once per step after structural changes.
  void commit_step(Rng& rng) {
    noise_step(rng);
    const std::uint64_t job = static_cast<std::uint64_t>(job_);
    records_.push_back({head_id_, job, 10 * job, grid_});
    if (rng.bernoulli(kDupProb)) {
      NozzleGrid dup = grid_;  // same-job re-poll; downsampling must drop it
      for (int tries = 0; tries < 8; ++tries) {
        const int row = static_cast<int>(rng.uniform_int(0, kGridRows - 1));
        const int col = static_cast<int>(rng.uniform_int(0, kGridCols - 1));
        const NfcState s = sample_state(noise_mix_, rng);
        if (can_place(row, col, s, false)) {
          dup.set(row, col, s);
          break;
        }
      }
      records_.push_back({head_id_, job, 10 * job + static_cast<std::uint64_t>(rng.uniform_int(1, 8)),
                          dup});
    }
    ++job_;
  }

  std::vector<LogRecord> take_records() { return std::move(records_); }

private:
  static std::size_t cell_index(int row, int col) {
    return static_cast<std::size_t>(row) * kGridCols + static_cast<std::size_t>(col);
  }

  int run_after(int row, int col, NfcState s) const {
    int len = 1;
    for (int c = col - 1; c >= 0 && grid_.at(row, c) == s; --c) ++len;
    for (int c = col + 1; c < kGridCols && grid_.at(row, c) == s; ++c) ++len;
    return len;
  }

  int place_structural(int row, int col, NfcState s) {
    grid_.set(row, col, s);
    ++struct_count_[static_cast<std::size_t>(static_cast<int>(s) - 1)];
    return static_cast<int>(cell_index(row, col));
  }

  void noise_step(Rng& rng) {
    if (!noise_active_ || spawn_p_ <= 0.0) return;
    for (auto& slot : noise_slots_) {
      if (slot >= 0) {  // one-step lifetime: clear our own cell, spawn next step
        grid_.set_cell(slot, NfcState::Empty);
        slot = -1;
      } else if (rng.bernoulli(spawn_p_)) {
        for (int tries = 0; tries < 16; ++tries) {
          const int row = static_cast<int>(rng.uniform_int(0, kGridRows - 1));
          const int col = static_cast<int>(rng.uniform_int(0, kGridCols - 1));
          const NfcState s = sample_state(noise_mix_, rng);
          if (can_place(row, col, s, false)) {
            grid_.set(row, col, s);
            slot = static_cast<int>(cell_index(row, col));
            break;
          }
        }
      }
    }
  }

  std::string head_id_;
  NozzleGrid grid_;
  Eigen::Array<double, kNumChannels, 1> noise_mix_;
  double spawn_p_;
  bool allow_nf4_edges_;
  bool noise_active_ = false;
  std::array<int, kNumChannels> struct_count_{};
  std::array<int, kNumChannels> caps_{};
  std::array<bool, kGridCells> reserved_{};
  std::array<int, 2> noise_slots_{};
  std::vector<LogRecord> records_;
  int job_ = 0;
};

// ---------------------------------------------------------------------------
// Archetype drivers. Each runs exactly n commit_step calls.

struct GrowthPlan {
  std::array<std::vector<int>, kNumChannels> sched;  // placements per channel per step

  void place_step(HeadSim& sim, int t, Rng& rng) const {
    for (int k = 0; k < kNumChannels; ++k) {
      const auto& s = sched[static_cast<std::size_t>(k)];
      if (s.empty()) continue;  // channel not part of this head
      for (int c = 0; c < s[static_cast<std::size_t>(t)]; ++c)
        sim.place_scatter(channel_state(k), rng);
    }
  }
};

/// Dominant channel grows to `intensity` cells; secondaries scale with the
/// mix, capped. Pattern1 adds a one-step spurt so the head can never read as
/// drift (Pattern5 requires every jump <= 5).
GrowthPlan make_growth_plan(const PatternParams& p, int n, int onset, Rng& rng) {
  GrowthPlan plan;
  const int win = argmax_weight(p.nfc_mix);
  const int target = static_cast<int>(rng.uniform_int(p.intensity.lo, p.intensity.hi));
  const bool spurt = p.pattern == Label::Pattern1;
  const int spread_target = spurt ? target - kSpurtCells : target;
  if (spread_target < 0) throw GenerationError("Pattern1 intensity below the spurt size");
  plan.sched[static_cast<std::size_t>(win)] = spread_schedule(n, spread_target, onset, n - 1, 4);
  if (spurt) {
    const int span = n - 1 - onset;
    const int lo = onset + span / 3;
    const int step = static_cast<int>(rng.uniform_int(lo, lo + std::max(0, span / 3)));
    plan.sched[static_cast<std::size_t>(win)][static_cast<std::size_t>(std::min(step, n - 1))] +=
        kSpurtCells;
  }
  for (int k = 0; k < kNumChannels; ++k) {
    if (k == win || p.nfc_mix[k] <= 0.0) continue;
    const int cnt = std::min<int>(
        kChannelCap, static_cast<int>(std::llround(target * p.nfc_mix[k] / p.nfc_mix[win])));
    plan.sched[static_cast<std::size_t>(k)] = spread_schedule(n, cnt, onset, n - 1, 2);
  }
  return plan;
}

void drive_scatter_growth(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  const int onset = onset_step(p.onset, n);
  if (p.pattern == Label::Pattern1) sim.set_cap(argmax_weight(p.nfc_mix), kGridCells);
  const GrowthPlan plan = make_growth_plan(p, n, onset, rng);
  for (int t = 0; t < n; ++t) {
    if (t == onset) sim.set_noise_active(true);
    plan.place_step(sim, t, rng);
    sim.commit_step(rng);
  }
}

/// Contiguous same-row block of the dominant state landing in a single step:
/// the Pattern2 jump-and-run signature. Secondaries scatter from early on.
void drive_block(HeadSim& sim, const PatternParams& p, int n, Rng& rng,
                 const GrowthPlan* extra_plan, int extra_onset) {
  const int win = argmax_weight(p.nfc_mix);
  const int len = static_cast<int>(rng.uniform_int(p.intensity.lo, p.intensity.hi));
  if (len > kGridCols) throw GenerationError("block longer than a row");
  const int row = static_cast<int>(rng.uniform_int(0, kGridRows - 1));
  const int col0 = static_cast<int>(rng.uniform_int(0, kGridCols - len));
  for (int c = 0; c < len; ++c) sim.reserve(row, col0 + c);

  const int block_step = onset_step(p.onset, n);
  const int bg_onset = extra_plan ? extra_onset : onset_step(kBackgroundOnset, n);
  GrowthPlan bg;
  if (!extra_plan) {
    for (int k = 0; k < kNumChannels; ++k) {
      if (k == win || p.nfc_mix[k] <= 0.0) continue;
      const int cnt = std::min<int>(
          kChannelCap, static_cast<int>(std::llround(len * p.nfc_mix[k] / p.nfc_mix[win])));
      bg.sched[static_cast<std::size_t>(k)] = spread_schedule(n, cnt, bg_onset, n - 1, 2);
    }
  }
  const GrowthPlan& plan = extra_plan ? *extra_plan : bg;
  for (int t = 0; t < n; ++t) {
    if (t == bg_onset) sim.set_noise_active(true);
    plan.place_step(sim, t, rng);
    if (t == block_step) {
      for (int c = 0; c < len; ++c) sim.place_reserved(row, col0 + c, channel_state(win));
    }
    sim.commit_step(rng);
  }
}

/// All-zero series until the last tenth of the lifetime, then a small burst.
void drive_sparse_burst(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  const int t0 = onset_step(p.onset, n);
  const int total = static_cast<int>(rng.uniform_int(p.intensity.lo, p.intensity.hi));
  const auto counts = allocate_counts(total, p.nfc_mix, kChannelCap);
  GrowthPlan plan;
  for (int k = 0; k < kNumChannels; ++k)
    plan.sched[static_cast<std::size_t>(k)] = spread_schedule(n, counts[static_cast<std::size_t>(k)], t0, n - 1, 9);
  for (int t = 0; t < n; ++t) {
    plan.place_step(sim, t, rng);
    sim.commit_step(rng);
  }
}

/// NF4 run growing inward from a row edge, a few cells per step.
void drive_edge_run(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  const int len = static_cast<int>(rng.uniform_int(p.intensity.lo, p.intensity.hi));
  const int row = static_cast<int>(rng.uniform_int(0, kGridRows - 1));
  const bool left = rng.bernoulli(0.5);
  std::vector<int> cols(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) cols[static_cast<std::size_t>(i)] = left ? i : kGridCols - 1 - i;
  for (int c : cols) sim.reserve(row, c);

  const int onset = onset_step(p.onset, n);
  const std::vector<int> run_sched = spread_schedule(n, len, onset, n - 1, 4);
  GrowthPlan scatter;
  const int win = argmax_weight(p.nfc_mix);
  for (int k = 0; k < kNumChannels; ++k) {
    if (k == win || p.nfc_mix[k] <= 0.0) continue;
    const int cnt = std::min<int>(
        kChannelCap, static_cast<int>(std::llround(len * p.nfc_mix[k] / p.nfc_mix[win])));
    scatter.sched[static_cast<std::size_t>(k)] = spread_schedule(n, cnt, onset, n - 1, 2);
  }
  int placed = 0;
  for (int t = 0; t < n; ++t) {
    if (t == onset) sim.set_noise_active(true);
    scatter.place_step(sim, t, rng);
    for (int c = 0; c < run_sched[static_cast<std::size_t>(t)]; ++c)
      sim.place_reserved(row, cols[static_cast<std::size_t>(placed++)], channel_state(win));
    sim.commit_step(rng);
  }
}

/// Slow multi-channel creep: never more than 3 structural cells per step, so
/// total jumps stay within the Pattern5 bound even with noise.
void drive_drift(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  const int onset = onset_step(p.onset, n);
  const int total = static_cast<int>(rng.uniform_int(p.intensity.lo, p.intensity.hi));
  const auto counts = allocate_counts(total, p.nfc_mix, kChannelCap);
  GrowthPlan plan;
  for (int k = 0; k < kNumChannels; ++k)
    plan.sched[static_cast<std::size_t>(k)] =
        spread_schedule(n, counts[static_cast<std::size_t>(k)], onset, n - 1, 1);
  for (int t = 0; t < n; ++t) {
    if (t == onset) sim.set_noise_active(true);
    plan.place_step(sim, t, rng);
    sim.commit_step(rng);
  }
}

// Other sub-modes. All three stay strictly outside every Pattern signature:
// terminal totals below 10 or above 60, no channel past 19 cells, no jump
// >= 28, nothing NF4 near an edge, first failure well before 90% of life.

void drive_other_trickle(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  PatternParams one = p;
  one.nfc_mix.setZero();
  one.nfc_mix[rng.uniform_int(0, kNumChannels - 1)] = 1.0;
  one.onset = rng.uniform(0.1, 0.7);
  drive_scatter_growth(sim, one, n, rng);
}

void drive_other_burst_recover(HeadSim& sim, const PatternParams&, int n, Rng& rng) {
  const int ch = static_cast<int>(rng.uniform_int(0, kNumChannels - 1));
  const int peak = static_cast<int>(rng.uniform_int(10, 25));
  sim.set_cap(ch, kGridCells);  // transient peak may pass the scatter cap; terminal is <= 5
  const int rest = static_cast<int>(rng.uniform_int(1, 5));
  const int onset = onset_step(rng.uniform(0.3, 0.6), n);
  const int hold = std::max(3, n / 10);
  std::vector<int> cells;
  for (int t = 0; t < n; ++t) {
    if (t == onset) {
      sim.set_noise_active(true);
      for (int c = 0; c < peak; ++c) cells.push_back(sim.place_scatter(channel_state(ch), rng));
    }
    if (t > onset + hold) {
      for (int c = 0; c < 2 && static_cast<int>(cells.size()) > rest; ++c) {
        sim.clear_structural(cells.back());
        cells.pop_back();
      }
    }
    sim.commit_step(rng);
  }
}

void drive_other_flat_multi(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  const int total = static_cast<int>(rng.uniform_int(62, 82));
  const auto counts = allocate_counts(total, p.nfc_mix, kChannelCap);
  sim.set_noise_active(true);
  for (int k = 0; k < kNumChannels; ++k) {
    for (int c = 0; c < counts[static_cast<std::size_t>(k)]; ++c)
      sim.place_scatter(channel_state(k), rng);
  }
  for (int t = 0; t < n; ++t) sim.commit_step(rng);
}

void drive_other(HeadSim& sim, const PatternParams& p, int n, Rng& rng) {
  switch (rng.uniform_int(0, 2)) {
    case 0: drive_other_trickle(sim, p, n, rng); break;
    case 1: drive_other_burst_recover(sim, p, n, rng); break;
    default: drive_other_flat_multi(sim, p, n, rng); break;
  }
}

GeneratedHead finish(HeadSim& sim, std::string head_id, LabelSet labels) {
  GeneratedHead out;
  out.log.head_id = std::move(head_id);
  out.log.records = sim.take_records();
  out.labels = labels;
  return out;
}

}  // namespace

GeneratedHead generate_head(const PatternParams& params, std::uint64_t head_seed,
                            std::string head_id) {
  params.validate();
  Rng rng(head_seed);
  const int n = static_cast<int>(rng.uniform_int(params.n_steps.lo, params.n_steps.hi));
  HeadSim sim(head_id, params.nfc_mix, params.noise_rate,
              params.spatial_mode == SpatialMode::EdgeRun);
  if (params.pattern == Label::Other) {
    drive_other(sim, params, n, rng);
  } else {
    switch (params.spatial_mode) {
      case SpatialMode::Scattered: drive_scatter_growth(sim, params, n, rng); break;
      case SpatialMode::ContiguousBlock: drive_block(sim, params, n, rng, nullptr, 0); break;
      case SpatialMode::SparseBurst: drive_sparse_burst(sim, params, n, rng); break;
      case SpatialMode::EdgeRun: drive_edge_run(sim, params, n, rng); break;
      case SpatialMode::Drift: drive_drift(sim, params, n, rng); break;
    }
  }
  return finish(sim, std::move(head_id), LabelSet(params.pattern));
}

GeneratedHead generate_head(const std::map<Label, PatternParams>& params, const LabelSet& target,
                            std::uint64_t head_seed, std::string head_id) {
  target.validate_canonical("generator target");
  if (target.size() == 1) {
    const Label l = target.labels().front();
    const auto it = params.find(l);
    if (it == params.end()) throw GenerationError("no params for " + label_name(l));
    return generate_head(it->second, head_seed, std::move(head_id));
  }
  LabelSet dual(Label::Pattern1);
  dual.add(Label::Pattern2);
  if (target != dual)
    throw GenerationError("no generator for label combination " + target.to_string());

  // Pattern1 scatter in its dominant channel plus a Pattern2 block in the
  // Pattern2 channel; both signatures hold at once because each is scoped to
  // its own channel.
  const PatternParams& p1 = params.at(Label::Pattern1);
  const PatternParams& p2 = params.at(Label::Pattern2);
  p1.validate();
  p2.validate();
  Rng rng(head_seed);
  const int n = static_cast<int>(rng.uniform_int(p1.n_steps.lo, p1.n_steps.hi));
  HeadSim sim(head_id, p1.nfc_mix, p1.noise_rate, false);
  const int onset1 = onset_step(p1.onset, n);
  sim.set_cap(argmax_weight(p1.nfc_mix), kGridCells);
  sim.set_cap(argmax_weight(p2.nfc_mix), kGridCells);  // block + scatter share the channel
  const GrowthPlan plan = make_growth_plan(p1, n, onset1, rng);
  drive_block(sim, p2, n, rng, &plan, onset1);
  return finish(sim, std::move(head_id), target);
}

Dataset generate_dataset(const DatasetSpec& spec, unsigned workers) {
  spec.validate();
  struct Job {
    LabelSet labels;
    std::string id;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::size_t index = 0;
  for (const auto& [labels, count] : spec.class_counts) {
    for (int c = 0; c < count; ++c, ++index) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "H%04zu", index);
      jobs.push_back({labels, buf, mix_seed(spec.seed, index)});
    }
  }
  std::vector<GeneratedHead> heads(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    heads[i] = generate_head(spec.params, jobs[i].labels, jobs[i].seed, jobs[i].id);
  });
  Dataset ds;
  ds.logs.reserve(heads.size());
  for (auto& head : heads) {
    if (!ds.manifest.emplace(head.log.head_id, head.labels).second)
      throw GenerationError("duplicate head id " + head.log.head_id);
    ds.logs.push_back(std::move(head.log));
  }
  return ds;
}

void write_dataset(const Dataset& ds, const std::string& dir) {
  ensure_directories(dir);
  write_log_file(ds.logs, dir + "/logs.tsv");
  write_manifest(ds.manifest, dir + "/manifest.csv");
}

}  // namespace nozzlelog::synth
