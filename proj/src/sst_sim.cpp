#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

#include "vat/errors.hpp"
#include "vat/simulator.hpp"

namespace vat {

namespace {

struct Sst {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> keys;  // sorted
};

using Run = std::vector<Sst>;

struct Level {
  // Leveling keeps at most one run; tiering stacks runs.
  std::vector<Run> runs;
  std::uint64_t pairs = 0;
  std::uint64_t cursor = 0;  // round-robin compaction pointer

  std::uint64_t sst_count() const {
    std::uint64_t n = 0;
    for (const Run& r : runs) n += r.size();
    return n;
  }
};

std::uint64_t run_pairs(const Run& run) {
  std::uint64_t n = 0;
  for (const Sst& s : run) n += s.keys.size();
  return n;
}

// Checks SSTs [begin, end) of a leveled run plus their boundaries with the
// neighbouring SSTs; the rest of the run was checked when it was written.
void check_run(const Run& run, std::size_t begin, std::size_t end, std::size_t level) {
  if (begin > 0) --begin;
  end = std::min(run.size(), end + 1);
  for (std::size_t k = begin; k < end; ++k) {
    const Sst& s = run[k];
    if (s.keys.empty() || s.lo != s.keys.front() || s.hi != s.keys.back() ||
        !std::is_sorted(s.keys.begin(), s.keys.end())) {
      throw std::logic_error("malformed SST in level " + std::to_string(level));
    }
    if (k > begin && !(run[k - 1].hi < s.lo)) {
      throw std::logic_error("overlapping SSTs in leveled level " + std::to_string(level));
    }
  }
}

class SstReplay {
 public:
  SstReplay(const WorkloadSpec& workload, const SimConfig& config) : workload_(workload), config_(config) {
    const std::uint64_t pair_bytes = workload.pair_bytes();
    memtable_pairs_ = config.s0_bytes / pair_bytes;
    sst_pairs_ = config.sst_bytes / pair_bytes;
    if (sst_pairs_ == 0) {
      throw DomainError("SST of " + std::to_string(config.sst_bytes) +
                        " bytes is smaller than one pair (" + std::to_string(pair_bytes) + " bytes)");
    }
    level_pair_bytes_ = config.design.uses_log() ? workload.key_bytes : pair_bytes;
    levels_.resize(static_cast<std::size_t>(config.levels) + 1);
    stats_.resize(levels_.size());
    last_ = config.levels;
  }

  void run(const std::vector<std::uint64_t>& keys) {
    std::vector<std::uint64_t> memtable;
    memtable.reserve(memtable_pairs_);
    for (std::uint64_t key : keys) {
      memtable.push_back(key);
      if (memtable.size() == memtable_pairs_) {
        flush(memtable);
        memtable.clear();
      }
    }
    if (!memtable.empty()) {
      notes_.push_back("final partial memtable of " + std::to_string(memtable.size()) +
                       " pairs flushed");
      flush(memtable);
    }
    if (config_.drain_at_end) drain();
  }

  SimReport finish(std::uint64_t num_pairs) {
    SimReport report;
    report.dataset_bytes = static_cast<double>(num_pairs * workload_.pair_bytes());
    report.levels = stats_;
    std::uint64_t resident_pairs = 0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      report.levels[i].resident_bytes = static_cast<double>(levels_[i].pairs * level_pair_bytes_);
      resident_pairs += levels_[i].pairs;
      report.bytes_read += stats_[i].bytes_read;
      report.bytes_written += stats_[i].bytes_written;
    }
    if (resident_pairs != num_pairs) {
      throw std::logic_error("pair conservation violated: " + std::to_string(resident_pairs) +
                             " resident vs " + std::to_string(num_pairs) + " inserted");
    }
    if (config_.drain_at_end && levels_[static_cast<std::size_t>(last_)].pairs != num_pairs) {
      throw std::logic_error("drain left data above the last level");
    }
    report.bytes_written += static_cast<double>(log_bytes_);
    report.amplification = (report.bytes_read + report.bytes_written) / report.dataset_bytes;
    report.write_amplification = report.bytes_written / report.dataset_bytes;
    report.steps = next_id_;
    report.effective_levels = last_;
    report.trace = std::move(trace_);
    report.notes = std::move(notes_);
    try {
      const TraceStats stats = estimate_a(report.trace);
      report.measured_a = stats.mean_raw;
      report.measured_a_clamped = stats.mean_clamped;
      report.a_samples = stats.samples;
    } catch (const DomainError&) {
      report.notes.push_back("no compaction into a non-empty lower level; measured a undefined (0)");
    }
    return report;
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  bool tiering() const { return config_.design.is_tiering(); }
  bool per_sst() const { return config_.design.per_sst() && !tiering(); }

  std::uint64_t capacity(int i) const {
    double cap = static_cast<double>(memtable_pairs_) * std::pow(config_.growth, i);
    return cap >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                         : static_cast<std::uint64_t>(cap);
  }

  // Cuts sorted keys into SSTs of sst_pairs_ keys without splitting a run of
  // equal keys across two SSTs.
  Run cut(const std::vector<std::uint64_t>& sorted) const {
    Run out;
    std::size_t begin = 0;
    while (begin < sorted.size()) {
      std::size_t end = std::min(sorted.size(), begin + static_cast<std::size_t>(sst_pairs_));
      while (end < sorted.size() && sorted[end] == sorted[end - 1]) ++end;
      Sst sst;
      sst.keys.assign(sorted.begin() + static_cast<std::ptrdiff_t>(begin),
                      sorted.begin() + static_cast<std::ptrdiff_t>(end));
      sst.lo = sst.keys.front();
      sst.hi = sst.keys.back();
      out.push_back(std::move(sst));
      begin = end;
    }
    return out;
  }

  void record(int upper, std::uint64_t msst_u, std::uint64_t msst_l, std::uint64_t tsst_u,
              std::uint64_t tsst_l, std::uint64_t upper_pairs, std::uint64_t lower_pairs) {
    const std::uint64_t upper_bytes = upper_pairs * level_pair_bytes_;
    const std::uint64_t lower_bytes = lower_pairs * level_pair_bytes_;
    CompactionRecord rec;
    rec.compaction_id = next_id_++;
    rec.level = static_cast<std::uint64_t>(upper);
    rec.msst_u = msst_u;
    rec.msst_l = msst_l;
    rec.tsst_u = tsst_u;
    rec.tsst_l = tsst_l;
    rec.bytes_read = (upper == 0 ? 0 : upper_bytes) + lower_bytes;
    rec.bytes_written = upper_bytes + lower_bytes;
    if (rec.bytes_written < upper_bytes) throw std::logic_error("merge lost upper-level bytes");
    LevelStats& s = stats_[idx(upper)];
    s.bytes_read += static_cast<double>(rec.bytes_read);
    s.bytes_written += static_cast<double>(rec.bytes_written);
    ++s.compactions;
    trace_.push_back(rec);
  }

  // Merges `upper` (sorted, disjoint SSTs from level i) into the single run of
  // level i + 1, rewriting exactly the lower SSTs overlapping [lo, hi].
  void merge_leveled(int i, Run upper, std::uint64_t tsst_u) {
    Level& lower = levels_[idx(i + 1)];
    if (lower.runs.empty()) lower.runs.emplace_back();
    Run& target = lower.runs.front();
    const std::uint64_t lo = upper.front().lo;
    const std::uint64_t hi = upper.back().hi;
    const auto first = std::partition_point(target.begin(), target.end(),
                                            [lo](const Sst& s) { return s.hi < lo; });
    const auto last = std::partition_point(first, target.end(),
                                           [hi](const Sst& s) { return s.lo <= hi; });

    std::vector<std::uint64_t> upper_keys;
    for (const Sst& s : upper) upper_keys.insert(upper_keys.end(), s.keys.begin(), s.keys.end());
    std::vector<std::uint64_t> lower_keys;
    for (auto it = first; it != last; ++it) lower_keys.insert(lower_keys.end(), it->keys.begin(), it->keys.end());
    std::vector<std::uint64_t> merged;
    merged.reserve(upper_keys.size() + lower_keys.size());
    std::merge(upper_keys.begin(), upper_keys.end(), lower_keys.begin(), lower_keys.end(),
               std::back_inserter(merged));

    record(i, upper.size(), static_cast<std::uint64_t>(last - first), tsst_u, target.size(),
           upper_keys.size(), lower_keys.size());

    Run output = cut(merged);
    const auto out_count = output.size();
    const auto pos = target.erase(first, last);
    const auto begin = static_cast<std::size_t>(pos - target.begin());
    target.insert(pos, std::make_move_iterator(output.begin()), std::make_move_iterator(output.end()));
    lower.pairs += upper_keys.size();
    if (config_.check_invariants) check_run(target, begin, begin + out_count, idx(i + 1));
  }

  // All runs of level i merged into one new run appended to level i + 1; the
  // lower level's data is not touched.
  void merge_tiered(int i, std::vector<Run> runs) {
    Level& lower = levels_[idx(i + 1)];
    std::vector<std::uint64_t> keys;
    std::uint64_t ssts = 0;
    for (const Run& run : runs) {
      ssts += run.size();
      const auto mid = keys.size();
      for (const Sst& s : run) keys.insert(keys.end(), s.keys.begin(), s.keys.end());
      std::inplace_merge(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(mid), keys.end());
    }
    record(i, ssts, 0, ssts, lower.sst_count(), keys.size(), 0);
    lower.pairs += keys.size();
    lower.runs.push_back(cut(keys));
  }

  void flush(std::vector<std::uint64_t> memtable) {
    std::sort(memtable.begin(), memtable.end());
    log_bytes_ += memtable.size() * workload_.pair_bytes() * (config_.design.uses_log() ? 1 : 0);
    Run run = cut(memtable);
    if (tiering()) {
      merge_tiered(0, {std::move(run)});
      for (int i = 1; i < last_; ++i) {
        if (levels_[idx(i)].pairs >= capacity(i)) compact_whole_level(i);
      }
      return;
    }
    if (!per_sst()) {
      const auto tsst = run.size();
      merge_leveled(0, std::move(run), tsst);
      for (int i = 1; i < last_; ++i) {
        if (levels_[idx(i)].pairs >= capacity(i)) compact_whole_level(i);
      }
      return;
    }
    // Per-SST: the flushed memtable's SSTs go down one pick at a time and
    // every level above the last is kept at (not above) capacity.
    Level& mem = levels_[0];
    mem.runs.assign(1, std::move(run));
    mem.pairs = run_pairs(mem.runs.front());
    while (mem.pairs > 0) {
      move_ssts(0);
      balance(1);
    }
    mem.runs.clear();
  }

  void compact_whole_level(int i) {
    Level& upper = levels_[idx(i)];
    if (upper.pairs == 0) return;
    std::vector<Run> runs = std::move(upper.runs);
    upper.runs.clear();
    upper.pairs = 0;
    if (tiering()) {
      merge_tiered(i, std::move(runs));
    } else {
      const auto tsst = runs.front().size();
      merge_leveled(i, std::move(runs.front()), tsst);
    }
  }

  void balance(int i) {
    if (i >= last_) return;
    while (levels_[idx(i)].pairs > capacity(i)) {
      move_ssts(i);
      balance(i + 1);
    }
  }

  std::size_t pick(int i) const {
    const Run& run = levels_[idx(i)].runs.front();
    if (config_.pick == PickPolicy::round_robin) {
      const std::uint64_t cursor = levels_[idx(i)].cursor;
      const auto it = std::partition_point(run.begin(), run.end(),
                                           [cursor](const Sst& s) { return s.lo < cursor; });
      return it == run.end() ? 0 : static_cast<std::size_t>(it - run.begin());
    }
    const Level& lower = levels_[idx(i + 1)];
    if (lower.runs.empty() || lower.runs.front().empty()) return 0;
    const Run& target = lower.runs.front();
    // Prefix sums of lower-level pairs for O(log n) overlap per candidate.
    std::vector<std::uint64_t> prefix(target.size() + 1, 0);
    for (std::size_t k = 0; k < target.size(); ++k) prefix[k + 1] = prefix[k] + target[k].keys.size();
    std::size_t best = 0;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < run.size(); ++k) {
      const Sst& s = run[k];
      const auto first = std::partition_point(target.begin(), target.end(),
                                              [&s](const Sst& t) { return t.hi < s.lo; });
      const auto last = std::partition_point(first, target.end(),
                                             [&s](const Sst& t) { return t.lo <= s.hi; });
      const auto overlap = prefix[static_cast<std::size_t>(last - target.begin())] -
                           prefix[static_cast<std::size_t>(first - target.begin())];
      const double ratio = static_cast<double>(overlap) / static_cast<double>(s.keys.size());
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = k;
      }
    }
    return best;
  }

  // Moves ssts_per_compaction consecutive SSTs of level i into level i + 1.
  void move_ssts(int i) {
    Level& upper = levels_[idx(i)];
    Run& run = upper.runs.front();
    const std::uint64_t tsst_u = run.size();
    const std::size_t start = pick(i);
    const std::size_t count =
        std::min(run.size() - start, static_cast<std::size_t>(config_.ssts_per_compaction));
    Run chosen(std::make_move_iterator(run.begin() + static_cast<std::ptrdiff_t>(start)),
               std::make_move_iterator(run.begin() + static_cast<std::ptrdiff_t>(start + count)));
    run.erase(run.begin() + static_cast<std::ptrdiff_t>(start),
              run.begin() + static_cast<std::ptrdiff_t>(start + count));
    upper.cursor = chosen.back().hi + 1;
    upper.pairs -= run_pairs(chosen);
    merge_leveled(i, std::move(chosen), tsst_u);
  }

  void drain() {
    for (int i = 1; i < last_; ++i) {
      if (per_sst()) {
        while (levels_[idx(i)].pairs > 0) {
          move_ssts(i);
          balance(i + 1);
        }
        levels_[idx(i)].runs.clear();
      } else {
        compact_whole_level(i);
      }
    }
  }

  const WorkloadSpec& workload_;
  const SimConfig& config_;
  std::uint64_t memtable_pairs_ = 0;
  std::uint64_t sst_pairs_ = 0;
  std::uint64_t level_pair_bytes_ = 0;
  std::uint64_t log_bytes_ = 0;
  std::uint64_t next_id_ = 0;
  int last_ = 0;
  std::vector<Level> levels_;
  std::vector<LevelStats> stats_;
  std::vector<CompactionRecord> trace_;
  std::vector<std::string> notes_;
};

}  // namespace

SimReport simulate_ssts(const std::vector<std::uint64_t>& keys, const WorkloadSpec& workload,
                        const SimConfig& config) {
  validate(config);
  if (keys.empty()) throw DomainError("key stream is empty");
  if (config.s0_bytes < workload.pair_bytes()) {
    throw DomainError("memtable smaller than one pair");
  }
  SstReplay replay(workload, config);
  replay.run(keys);
  return replay.finish(keys.size());
}

SimReport simulate_ssts(const WorkloadSpec& workload, const SimConfig& config) {
  return simulate_ssts(generate_keys(workload), workload, config);
}

}  // namespace vat
