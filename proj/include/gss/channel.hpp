#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "gss/common.hpp"
#include "gss/dispersion.hpp"
#include "gss/error.hpp"
#include "gss/params.hpp"

namespace gss {

// Erasure positions within a finite horizon [0, horizon), kept sorted.
struct ErasurePattern {
  std::int64_t horizon = 0;
  std::vector<std::int64_t> erased;

  static ErasurePattern make(std::int64_t horizon, std::vector<std::int64_t> erased) {
    if (horizon < 1) fail(ErrorCode::kBadInput, "horizon must be >= 1");
    std::sort(erased.begin(), erased.end());
    erased.erase(std::unique(erased.begin(), erased.end()), erased.end());
    for (const auto t : erased)
      if (t < 0 || t >= horizon)
        fail(ErrorCode::kBadInput,
             "erasure at " + std::to_string(t) + " outside horizon " + std::to_string(horizon));
    return ErasurePattern{horizon, std::move(erased)};
  }

  bool contains(std::int64_t t) const {
    return std::binary_search(erased.begin(), erased.end(), t);
  }

  std::string to_text() const {
    std::string out;
    for (std::size_t i = 0; i < erased.size(); ++i) {
      if (i) out += " ";
      out += std::to_string(erased[i]);
    }
    return out;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"horizon", horizon}, {"erased", erased}};
  }

  static ErasurePattern from_json(const nlohmann::json& j) {
    return make(j.at("horizon").get<std::int64_t>(),
                j.at("erased").get<std::vector<std::int64_t>>());
  }

  friend bool operator==(const ErasurePattern&, const ErasurePattern&) = default;
};

namespace detail {

// One window [start, start + w) passes if it holds at most `a` erasures, or
// the erasures form a single run of length at most `b`.
inline bool window_admissible(const std::vector<char>& hit, std::int64_t start, int w,
                              const ChannelParams& params) {
  int count = 0;
  std::int64_t first = -1;
  std::int64_t last = -1;
  for (std::int64_t i = start; i < start + w; ++i) {
    if (!hit[i]) continue;
    ++count;
    if (first < 0) first = i;
    last = i;
  }
  if (count <= params.a) return true;
  return count <= params.b && last - first + 1 == count;
}

}  // namespace detail

// A pattern is admissible when every window of tau + 1 consecutive slots that
// fits fully inside the horizon passes the (a, b) test.
inline bool is_admissible(const ErasurePattern& pattern, const ChannelParams& params) {
  const int w = params.window();
  if (pattern.horizon < w) return true;
  std::vector<char> hit(pattern.horizon, 0);
  for (const auto t : pattern.erased) hit[t] = 1;
  for (std::int64_t start = 0; start + w <= pattern.horizon; ++start)
    if (!detail::window_admissible(hit, start, w, params)) return false;
  return true;
}

// Enumerates admissible patterns in lexicographic order of their sorted
// erasure lists, pruning on the first violated window (admissibility is
// monotone under erasure removal, so pruning is exact). Returns the number
// of yielded patterns.
inline std::uint64_t enumerate_admissible(
    const ChannelParams& params, std::int64_t horizon,
    const std::function<void(const ErasurePattern&)>& yield, bool maximal_only = false,
    std::uint64_t budget = kDefaultBudget) {
  if (horizon < 1) fail(ErrorCode::kBadInput, "horizon must be >= 1");
  const int w = params.window();
  std::vector<char> hit(horizon, 0);
  std::vector<std::int64_t> elems;
  std::uint64_t visited = 0;
  std::uint64_t yielded = 0;

  auto windows_ok_at = [&](std::int64_t e) {
    const std::int64_t lo = std::max<std::int64_t>(0, e - w + 1);
    const std::int64_t hi = std::min<std::int64_t>(e, horizon - w);
    for (std::int64_t start = lo; start <= hi; ++start)
      if (!detail::window_admissible(hit, start, w, params)) return false;
    return true;
  };
  auto is_maximal = [&]() {
    for (std::int64_t e = 0; e < horizon; ++e) {
      if (hit[e]) continue;
      hit[e] = 1;
      const bool ok = windows_ok_at(e);
      hit[e] = 0;
      if (ok) return false;
    }
    return true;
  };

  std::function<void(std::int64_t)> visit = [&](std::int64_t next) {
    if (++visited > budget)
      fail(ErrorCode::kBudgetExceeded,
           "admissible-pattern enumeration exceeded budget " + std::to_string(budget));
    if (!maximal_only || is_maximal()) {
      ++yielded;
      yield(ErasurePattern{horizon, elems});
    }
    for (std::int64_t e = next; e < horizon; ++e) {
      hit[e] = 1;
      elems.push_back(e);
      if (windows_ok_at(e)) visit(e + 1);
      hit[e] = 0;
      elems.pop_back();
    }
  };
  visit(0);
  return yielded;
}

inline std::vector<ErasurePattern> collect_admissible(const ChannelParams& params,
                                                      std::int64_t horizon,
                                                      bool maximal_only = false,
                                                      std::uint64_t budget = kDefaultBudget) {
  std::vector<ErasurePattern> out;
  enumerate_admissible(
      params, horizon, [&](const ErasurePattern& p) { out.push_back(p); }, maximal_only,
      budget);
  return out;
}

// Two-state Gilbert-Elliott loss model. These defaults are toolkit defaults
// for demonstration runs, not measurements of any particular network.
struct GeConfig {
  double p_good_to_bad = 0.01;
  double p_bad_to_good = 0.3;
  double loss_good = 0.001;
  double loss_bad = 1.0;
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    const double probs[] = {p_good_to_bad, p_bad_to_good, loss_good, loss_bad};
    for (const double p : probs)
      if (!(p >= 0.0 && p <= 1.0))
        fail(ErrorCode::kBadInput, "gilbert-elliott probabilities must lie in [0, 1]");
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"p_good_to_bad", p_good_to_bad},
                          {"p_bad_to_good", p_bad_to_good},
                          {"loss_good", loss_good},
                          {"loss_bad", loss_bad},
                          {"seed", seed}};
  }

  // All five fields are mandatory: a partial config silently mixed with
  // defaults would be unreproducible.
  static GeConfig from_json(const nlohmann::json& j) {
    GeConfig config;
    for (const char* key :
         {"p_good_to_bad", "p_bad_to_good", "loss_good", "loss_bad", "seed"})
      if (!j.contains(key))
        fail(ErrorCode::kBadInput, std::string("gilbert-elliott config missing '") + key + "'");
    config.p_good_to_bad = j.at("p_good_to_bad").get<double>();
    config.p_bad_to_good = j.at("p_bad_to_good").get<double>();
    config.loss_good = j.at("loss_good").get<double>();
    config.loss_bad = j.at("loss_bad").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.validate();
    return config;
  }
};

// Samples a pattern of `length` slots. Starts in the good state; per slot,
// first draws the loss, then the state transition. Identical seeds give
// identical patterns on every platform.
inline ErasurePattern ge_sample(const GeConfig& config, std::int64_t length) {
  if (length < 1) fail(ErrorCode::kBadInput, "sample length must be >= 1");
  config.validate();
  std::mt19937_64 rng(config.seed);
  bool bad = false;
  std::vector<std::int64_t> erased;
  for (std::int64_t t = 0; t < length; ++t) {
    const double loss = bad ? config.loss_bad : config.loss_good;
    if (unit_double(rng()) < loss) erased.push_back(t);
    const double flip = bad ? config.p_bad_to_good : config.p_good_to_bad;
    if (unit_double(rng()) < flip) bad = !bad;
  }
  return ErasurePattern{length, std::move(erased)};
}

// Symbols lost per codeword anchor: entry s is the dispersion-weighted count
// of erased slots in [s, s + tau], for every anchor whose span fits.
inline std::vector<std::int64_t> codeword_loss_profile(const ErasurePattern& pattern,
                                                       const DispersionVector& dv) {
  const std::int64_t len = static_cast<std::int64_t>(dv.size());
  std::vector<std::int64_t> out;
  if (pattern.horizon < len) return out;
  std::vector<char> hit(pattern.horizon, 0);
  for (const auto t : pattern.erased) hit[t] = 1;
  for (std::int64_t anchor = 0; anchor + len <= pattern.horizon; ++anchor) {
    std::int64_t loss = 0;
    for (std::int64_t i = 0; i < len; ++i)
      if (hit[anchor + i]) loss += dv.entry(i);
    out.push_back(loss);
  }
  return out;
}

}  // namespace gss
