#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gss/common.hpp"
#include "gss/error.hpp"
#include "gss/params.hpp"
#include "gss/rational.hpp"

namespace gss {

// Per-slot symbol counts (n_1, ..., n_{tau+1}) of one codeword's span across
// consecutive packets. Slot indices are 1-based in text and diagnostics.
class DispersionVector {
 public:
  explicit DispersionVector(std::vector<std::int64_t> entries)
      : entries_(std::move(entries)) {
    if (entries_.empty())
      fail(ErrorCode::kBadInput, "dispersion vector needs at least one slot");
    for (const auto e : entries_)
      if (e < 0) fail(ErrorCode::kBadInput, "dispersion entries must be >= 0");
  }

  const std::vector<std::int64_t>& entries() const { return entries_; }
  std::int64_t entry(std::size_t index) const { return entries_[index]; }
  std::size_t size() const { return entries_.size(); }

  std::int64_t total() const {
    return std::accumulate(entries_.begin(), entries_.end(), std::int64_t{0});
  }

  bool first_slot_empty() const { return entries_.front() == 0; }

  std::string to_text() const {
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(entries_[i]);
    }
    return out;
  }

  static DispersionVector from_text(const std::string& text) {
    std::vector<std::int64_t> entries;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
      std::size_t pos = 0;
      std::int64_t value = 0;
      try {
        value = std::stoll(token, &pos);
      } catch (const std::exception&) {
        fail(ErrorCode::kBadInput, "bad dispersion entry '" + token + "'");
      }
      while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
      if (pos != token.size())
        fail(ErrorCode::kBadInput, "bad dispersion entry '" + token + "'");
      entries.push_back(value);
    }
    if (entries.empty()) fail(ErrorCode::kBadInput, "empty dispersion text");
    return DispersionVector(std::move(entries));
  }

  nlohmann::json to_json(const ChannelParams& params) const {
    return nlohmann::json{
        {"params", {{"a", params.a}, {"b", params.b}, {"tau", params.tau}}},
        {"entries", entries_}};
  }

  static std::pair<ChannelParams, DispersionVector> from_json(const nlohmann::json& j) {
    if (!j.contains("params") || !j.contains("entries"))
      fail(ErrorCode::kBadInput, "dispersion json needs 'params' and 'entries'");
    const auto& p = j.at("params");
    ChannelParams params = ChannelParams::make(p.at("a").get<int>(), p.at("b").get<int>(),
                                               p.at("tau").get<int>());
    DispersionVector dv(j.at("entries").get<std::vector<std::int64_t>>());
    return {params, dv};
  }

  friend bool operator==(const DispersionVector&, const DispersionVector&) = default;

 private:
  std::vector<std::int64_t> entries_;
};

namespace detail {

// Worst loss from `a` arbitrary slot erasures: the a largest entries.
inline std::int64_t top_a_sum(const std::vector<std::int64_t>& entries, int a,
                              std::vector<std::int64_t>& scratch) {
  scratch = entries;
  const auto mid = scratch.begin() + std::min<std::size_t>(a, scratch.size());
  std::partial_sort(scratch.begin(), mid, scratch.end(), std::greater<>());
  return std::accumulate(scratch.begin(), mid, std::int64_t{0});
}

// Worst loss from one burst of b consecutive slots.
inline std::int64_t max_window_sum(const std::vector<std::int64_t>& entries, int b) {
  std::int64_t best = 0;
  std::int64_t current = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    current += entries[i];
    if (i >= static_cast<std::size_t>(b)) current -= entries[i - b];
    if (i + 1 >= static_cast<std::size_t>(b)) best = std::max(best, current);
  }
  return best;
}

}  // namespace detail

struct ResilienceReport {
  std::int64_t n = 0;
  std::int64_t r = 0;
  Rational rate;
  bool random_tight = false;  // some size-a slot subset attains r
  bool burst_tight = false;   // some b-slot window attains r
};

inline ResilienceReport effective_resilience(const DispersionVector& dv,
                                             const ChannelParams& params) {
  if (dv.size() != static_cast<std::size_t>(params.window()))
    fail(ErrorCode::kLengthMismatch,
         "dispersion vector has " + std::to_string(dv.size()) + " slots, need tau+1 = " +
             std::to_string(params.window()));
  ResilienceReport report;
  report.n = dv.total();
  if (report.n == 0)
    fail(ErrorCode::kZeroTotal, "dispersion vector is all zero");
  std::vector<std::int64_t> scratch;
  const std::int64_t top = detail::top_a_sum(dv.entries(), params.a, scratch);
  const std::int64_t win = detail::max_window_sum(dv.entries(), params.b);
  report.r = std::max(top, win);
  report.rate = Rational(report.n - report.r, report.n);
  report.random_tight = top == report.r;
  report.burst_tight = win == report.r;
  return report;
}

struct DispersionCheck {
  bool ok = false;
  bool first_slot_empty = false;
  std::string diagnostic;
};

// Checks that (vector, r) is an admissible dispersion for the channel: no
// size-a subset nor b-window of slots exceeds r, and at least one constraint
// is tight (otherwise r overstates the needed protection).
inline DispersionCheck is_dispersion_vector(const DispersionVector& dv,
                                            const ChannelParams& params, std::int64_t r) {
  if (r < 0) fail(ErrorCode::kBadInput, "resilience r must be >= 0");
  DispersionCheck check;
  check.first_slot_empty = dv.first_slot_empty();
  if (dv.size() != static_cast<std::size_t>(params.window())) {
    check.diagnostic = "vector has " + std::to_string(dv.size()) +
                       " slots, channel window needs " + std::to_string(params.window());
    return check;
  }
  std::vector<std::int64_t> scratch;
  const std::int64_t top = detail::top_a_sum(dv.entries(), params.a, scratch);
  if (top > r) {
    check.diagnostic = "the " + std::to_string(params.a) +
                       " largest entries sum to " + std::to_string(top) + " > " +
                       std::to_string(r);
    return check;
  }
  std::int64_t max_win = 0;
  for (std::size_t j = 0; j + params.b <= dv.size(); ++j) {
    std::int64_t sum = 0;
    for (std::size_t i = j; i < j + params.b; ++i) sum += dv.entry(i);
    if (sum > r) {
      check.diagnostic = "burst window [" + std::to_string(j + 1) + ".." +
                         std::to_string(j + params.b) + "] sums to " +
                         std::to_string(sum) + " > " + std::to_string(r);
      return check;
    }
    max_win = std::max(max_win, sum);
  }
  if (top != r && max_win != r) {
    check.diagnostic = "no constraint tight: max subset sum " + std::to_string(top) +
                       ", max burst sum " + std::to_string(max_win) + " both < " +
                       std::to_string(r);
    return check;
  }
  check.ok = true;
  if (check.first_slot_empty)
    check.diagnostic = "warning: first slot is empty (codewords would start late)";
  return check;
}

struct Construction {
  DispersionVector vector;
  ResilienceReport report;
};

// Predicted (n, r) for the construction that applies to these parameters.
struct TheoremPrediction {
  std::int64_t n = 0;
  std::int64_t r = 0;
};

inline TheoremPrediction predicted_nr(const ChannelParams& params) {
  const auto [m, delta] = decompose(params);
  TheoremPrediction pred;
  if (classify_regime(params) == Regime::kGsdeGain) {
    const std::int64_t spread = params.b - params.a;
    const std::int64_t l = std::lcm<std::int64_t>(spread, m);
    const std::int64_t t = l / spread;
    pred.n = t * m * params.b + (m + 1) * (l / m) + t * delta;
    pred.r = t * params.b + l / m;
  } else {
    pred.n = static_cast<std::int64_t>(m) * params.a + std::min(params.a, delta);
    pred.r = params.a;
  }
  return pred;
}

// 0/1 staggering: slot i carries a symbol iff its 1-based residue mod b lies
// in [1, a]. Yields n = m*a + min(a, delta) and r = a.
inline Construction construction1(const ChannelParams& params) {
  const int len = params.window();
  std::vector<std::int64_t> entries(len, 0);
  for (int i = 1; i <= len; ++i) {
    const int residue = ((i - 1) % params.b) + 1;
    if (residue <= params.a) entries[i - 1] = 1;
  }
  DispersionVector dv(std::move(entries));
  ResilienceReport report = effective_resilience(dv, params);
  return Construction{std::move(dv), report};
}

// Weighted staggering for the gain regime: residue-1 slots carry gamma
// symbols, every other slot carries t, with t = lcm(b-a, m) / (b-a) and
// gamma = t + lcm(b-a, m) / m. Attains max_gsde_rate exactly.
inline Construction construction2(const ChannelParams& params) {
  if (classify_regime(params) != Regime::kGsdeGain)
    fail(ErrorCode::kRegimeMismatch,
         "weighted staggering needs b > a > (m+1)*delta > 0 at " + params.label());
  const auto [m, delta] = decompose(params);
  (void)delta;
  const std::int64_t spread = params.b - params.a;
  const std::int64_t l = std::lcm<std::int64_t>(spread, m);
  const std::int64_t t = l / spread;
  const std::int64_t gamma = t + l / m;
  const int len = params.window();
  std::vector<std::int64_t> entries(len, t);
  for (int i = 1; i <= len; ++i)
    if ((i - 1) % params.b == 0) entries[i - 1] = gamma;
  DispersionVector dv(std::move(entries));
  ResilienceReport report = effective_resilience(dv, params);
  return Construction{std::move(dv), report};
}

inline const char* construction_name(const ChannelParams& params) {
  return classify_regime(params) == Regime::kGsdeGain ? "weighted" : "baseline";
}

inline Construction best_dispersion(const ChannelParams& params) {
  return classify_regime(params) == Regime::kGsdeGain ? construction2(params)
                                                      : construction1(params);
}

struct OracleResult {
  Rational rate;
  DispersionVector witness{std::vector<std::int64_t>{1}};
  std::uint64_t vectors_scored = 0;
  int entry_bound = 0;
};

namespace detail {

struct OracleAccumulator {
  bool has = false;
  Rational rate;
  std::vector<std::int64_t> entries;
  std::uint64_t scored = 0;

  // Enumeration inside one task is lexicographic, so keeping the first
  // maximiser keeps the lex-smallest witness.
  void consider(std::int64_t n, std::int64_t r, const std::vector<std::int64_t>& candidate) {
    ++scored;
    const Rational candidate_rate(n - r, n);
    if (!has || rate < candidate_rate) {
      has = true;
      rate = candidate_rate;
      entries = candidate;
    }
  }
};

inline void oracle_scan(const ChannelParams& params, int bound,
                        std::vector<std::int64_t>& work, std::size_t pos,
                        OracleAccumulator& acc, std::vector<std::int64_t>& scratch) {
  if (pos == work.size()) {
    std::int64_t n = 0;
    for (const auto v : work) n += v;
    const std::int64_t top = top_a_sum(work, params.a, scratch);
    const std::int64_t win = max_window_sum(work, params.b);
    acc.consider(n, std::max(top, win), work);
    return;
  }
  for (std::int64_t v = 0; v <= bound; ++v) {
    work[pos] = v;
    oracle_scan(params, bound, work, pos + 1, acc, scratch);
  }
}

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace detail

// Exhaustive search over all vectors with entries in [0, entry_bound] and a
// nonempty first slot, maximising (n - r) / n. Ties resolve to the
// lexicographically smallest witness regardless of thread count.
inline OracleResult brute_force_max_rate(const ChannelParams& params, int entry_bound,
                                         std::uint64_t budget = kDefaultBudget,
                                         int threads = 1) {
  if (entry_bound < 1) fail(ErrorCode::kBadInput, "entry bound must be >= 1");
  const int len = params.window();
  detail::int128 space = 1;
  for (int i = 0; i < len; ++i) {
    space *= entry_bound + 1;
    if (space > static_cast<detail::int128>(1) << 100) break;
  }
  if (space > static_cast<detail::int128>(budget))
    fail(ErrorCode::kBudgetExceeded,
         "state space (" + std::to_string(entry_bound + 1) + "^" + std::to_string(len) +
             ") exceeds budget " + std::to_string(budget));

  // Tasks fix the first two slots; task order equals lex order on vectors.
  std::vector<std::pair<std::int64_t, std::int64_t>> tasks;
  for (std::int64_t v1 = 1; v1 <= entry_bound; ++v1)
    for (std::int64_t v2 = 0; v2 <= entry_bound; ++v2) tasks.emplace_back(v1, v2);

  std::vector<detail::OracleAccumulator> per_task(tasks.size());
  auto run_task = [&](std::size_t index) {
    std::vector<std::int64_t> work(len, 0);
    std::vector<std::int64_t> scratch;
    work[0] = tasks[index].first;
    work[1] = tasks[index].second;
    detail::oracle_scan(params, entry_bound, work, 2, per_task[index], scratch);
  };

  const int worker_count = std::min<int>(detail::resolve_threads(threads),
                                         static_cast<int>(tasks.size()));
  if (worker_count <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::vector<std::future<void>> futures;
    for (int w = 0; w < worker_count; ++w)
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < tasks.size(); i += worker_count) run_task(i);
      }));
    for (auto& f : futures) f.get();
  }

  OracleResult result;
  result.entry_bound = entry_bound;
  bool has = false;
  Rational best;
  std::vector<std::int64_t> witness;
  for (const auto& acc : per_task) {
    result.vectors_scored += acc.scored;
    if (!acc.has) continue;
    if (!has || best < acc.rate) {
      has = true;
      best = acc.rate;
      witness = acc.entries;
    }
    // Equal rates cannot pick a later task: task order is lex order.
  }
  result.rate = best;
  result.witness = DispersionVector(std::move(witness));
  return result;
}

// Length bound for the best constructions: ceil(tau^2 / b) + (tau + 1) * b.
inline std::int64_t field_size_bound(const ChannelParams& params) {
  const std::int64_t tau = params.tau;
  const std::int64_t b = params.b;
  return (tau * tau + b - 1) / b + (tau + 1) * b;
}

}  // namespace gss
