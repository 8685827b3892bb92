#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gss/channel.hpp"
#include "gss/codec.hpp"
#include "gss/common.hpp"
#include "gss/dispersion.hpp"
#include "gss/error.hpp"
#include "gss/gf.hpp"
#include "gss/mds.hpp"
#include "gss/params.hpp"
#include "gss/rational.hpp"

namespace gss {

// Smallest supported field that fits a length-n code.
inline std::uint32_t field_order_for(std::int64_t n) {
  if (n <= 256) return 256;
  if (n <= 65536) return 65536;
  fail(ErrorCode::kLengthExceedsField,
       "code length " + std::to_string(n) + " exceeds the largest supported field");
}

// Report envelope shared by every command's JSON output.
inline nlohmann::json make_report(const std::string& command, nlohmann::json inputs,
                                  nlohmann::json results, double wall_time_ms) {
  return nlohmann::json{{"command", command},
                        {"inputs", std::move(inputs)},
                        {"results", std::move(results)},
                        {"meta",
                         {{"version", kVersion},
                          {"toolchain", toolchain_string()},
                          {"wall_time_ms", wall_time_ms}}}};
}

namespace detail {

inline std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ",";
    out += cells[i];
  }
  out += "\n";
  return out;
}

inline int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    fail(ErrorCode::kBadInput, "bad " + what + " '" + text + "'");
  }
}

}  // namespace detail

// Sweep text like "a=1..3 b=3 tau=6..8": each key gives a value or an
// inclusive range; the triples are the cross product, skipping combinations
// that violate 0 < a <= b <= tau.
inline std::vector<ChannelParams> parse_sweep(const std::string& text) {
  struct Range {
    int lo = 0;
    int hi = -1;
  };
  Range ra, rb, rt;
  std::stringstream ss(text);
  std::string token;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::kBadInput, "sweep term '" + token + "' needs key=value");
    const std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    Range range;
    const auto dots = value.find("..");
    if (dots == std::string::npos) {
      range.lo = range.hi = detail::parse_int(value, "sweep value");
    } else {
      range.lo = detail::parse_int(value.substr(0, dots), "sweep value");
      range.hi = detail::parse_int(value.substr(dots + 2), "sweep value");
    }
    if (range.lo > range.hi)
      fail(ErrorCode::kBadInput, "empty sweep range '" + token + "'");
    if (key == "a")
      ra = range;
    else if (key == "b")
      rb = range;
    else if (key == "tau")
      rt = range;
    else
      fail(ErrorCode::kBadInput, "unknown sweep key '" + key + "'");
  }
  if (ra.hi < ra.lo || rb.hi < rb.lo || rt.hi < rt.lo)
    fail(ErrorCode::kBadInput, "sweep needs a=, b= and tau= terms");
  std::vector<ChannelParams> out;
  for (int a = ra.lo; a <= ra.hi; ++a)
    for (int b = rb.lo; b <= rb.hi; ++b)
      for (int tau = rt.lo; tau <= rt.hi; ++tau)
        if (0 < a && a <= b && b <= tau) out.push_back(ChannelParams{a, b, tau});
  if (out.empty()) fail(ErrorCode::kBadInput, "sweep matches no valid (a, b, tau) triple");
  return out;
}

// ---------------------------------------------------------------- rates ----

struct RateRow {
  ChannelParams params;
  Decomposition decomp;
  Regime regime;
  Rational optimal;
  Rational baseline;
  Rational staggered;
  std::int64_t n = 0;
  std::int64_t r = 0;
  std::int64_t q_classic = 0;   // n - 1, the classic MDS-sufficient field size
  std::uint32_t q_used = 0;     // field order this toolkit instantiates
};

struct RatesReport {
  std::vector<RateRow> rows;
};

inline RatesReport cmd_rates(const std::vector<ChannelParams>& triples) {
  if (triples.empty()) fail(ErrorCode::kInvalidParams, "no channel triples given");
  RatesReport report;
  for (const auto& params : triples) {
    ChannelParams::make(params.a, params.b, params.tau);
    const Construction c = best_dispersion(params);
    RateRow row;
    row.params = params;
    row.decomp = decompose(params);
    row.regime = classify_regime(params);
    row.optimal = optimal_rate(params);
    row.baseline = ss_rate(params);
    row.staggered = max_gsde_rate(params);
    row.n = c.report.n;
    row.r = c.report.r;
    row.q_classic = c.report.n - 1;
    row.q_used = field_order_for(c.report.n);
    report.rows.push_back(row);
  }
  return report;
}

inline std::string rates_csv(const RatesReport& report) {
  std::string out = detail::csv_join(
      {"a", "b", "tau", "m", "delta", "regime", "rate_optimal", "rate_optimal_dec",
       "rate_baseline", "rate_baseline_dec", "rate_staggered", "rate_staggered_dec", "n",
       "r", "q_classic", "q_used"});
  for (const auto& row : report.rows)
    out += detail::csv_join(
        {std::to_string(row.params.a), std::to_string(row.params.b),
         std::to_string(row.params.tau), std::to_string(row.decomp.m),
         std::to_string(row.decomp.delta), to_string(row.regime), row.optimal.to_string(),
         row.optimal.decimal3(), row.baseline.to_string(), row.baseline.decimal3(),
         row.staggered.to_string(), row.staggered.decimal3(), std::to_string(row.n),
         std::to_string(row.r), std::to_string(row.q_classic), std::to_string(row.q_used)});
  return out;
}

inline nlohmann::json rates_results_json(const RatesReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows)
    rows.push_back(
        {{"a", row.params.a},
         {"b", row.params.b},
         {"tau", row.params.tau},
         {"m", row.decomp.m},
         {"delta", row.decomp.delta},
         {"regime", to_string(row.regime)},
         {"rate_optimal", row.optimal.to_string()},
         {"rate_optimal_dec", row.optimal.decimal3()},
         {"rate_baseline", row.baseline.to_string()},
         {"rate_baseline_dec", row.baseline.decimal3()},
         {"rate_staggered", row.staggered.to_string()},
         {"rate_staggered_dec", row.staggered.decimal3()},
         {"n", row.n},
         {"r", row.r},
         {"q_classic", row.q_classic},
         {"q_used", row.q_used}});
  return nlohmann::json{{"rows", std::move(rows)}};
}

// ------------------------------------------------------------ construct ----

struct ConstructReport {
  ChannelParams params;
  Regime regime;
  std::string construction;
  DispersionVector vector{std::vector<std::int64_t>{1}};
  ResilienceReport report;
  TheoremPrediction predicted;
  DispersionCheck check;
};

inline ConstructReport cmd_construct(const ChannelParams& params) {
  ChannelParams::make(params.a, params.b, params.tau);
  ConstructReport out;
  out.params = params;
  out.regime = classify_regime(params);
  out.construction = construction_name(params);
  Construction c = best_dispersion(params);
  out.vector = std::move(c.vector);
  out.report = c.report;
  out.predicted = predicted_nr(params);
  out.check = is_dispersion_vector(out.vector, params, out.report.r);
  return out;
}

inline nlohmann::json construct_results_json(const ConstructReport& report) {
  return nlohmann::json{
      {"a", report.params.a},
      {"b", report.params.b},
      {"tau", report.params.tau},
      {"regime", to_string(report.regime)},
      {"construction", report.construction},
      {"vector", report.vector.entries()},
      {"vector_text", report.vector.to_text()},
      {"n", report.report.n},
      {"r", report.report.r},
      {"rate", report.report.rate.to_string()},
      {"rate_dec", report.report.rate.decimal3()},
      {"random_tight", report.report.random_tight},
      {"burst_tight", report.report.burst_tight},
      {"predicted_n", report.predicted.n},
      {"predicted_r", report.predicted.r},
      {"valid", report.check.ok}};
}

inline std::string construct_csv(const ConstructReport& report) {
  std::string out = detail::csv_join({"a", "b", "tau", "regime", "construction", "vector",
                                      "n", "r", "rate", "rate_dec", "random_tight",
                                      "burst_tight", "predicted_n", "predicted_r", "valid"});
  out += detail::csv_join(
      {std::to_string(report.params.a), std::to_string(report.params.b),
       std::to_string(report.params.tau), to_string(report.regime), report.construction,
       "\"" + report.vector.to_text() + "\"", std::to_string(report.report.n),
       std::to_string(report.report.r), report.report.rate.to_string(),
       report.report.rate.decimal3(), report.report.random_tight ? "true" : "false",
       report.report.burst_tight ? "true" : "false", std::to_string(report.predicted.n),
       std::to_string(report.predicted.r), report.check.ok ? "true" : "false"});
  return out;
}

// --------------------------------------------------------------- verify ----

struct VerifyOptions {
  ChannelParams params;
  std::int64_t horizon = 0;
  bool maximal_only = false;
  int k_override = 0;  // 0 picks k = n - r
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = kDefaultSeed;
};

struct VerifyReport {
  VerifyOptions options;
  DispersionVector vector{std::vector<std::int64_t>{1}};
  int n = 0;
  int k = 0;
  VerifyResult result;
  std::string note;
};

inline VerifyReport cmd_verify(const VerifyOptions& options) {
  ChannelParams::make(options.params.a, options.params.b, options.params.tau);
  VerifyReport report;
  report.options = options;
  Construction c = best_dispersion(options.params);
  report.vector = std::move(c.vector);
  report.n = static_cast<int>(c.report.n);
  report.k = options.k_override > 0 ? options.k_override
                                    : static_cast<int>(c.report.n - c.report.r);
  const Gf& field = Gf::for_order(field_order_for(report.n));
  const MdsCode code = MdsCode::build(report.n, report.k, field);
  report.result = verify_exhaustive(options.params, report.vector, code, options.horizon,
                                    options.maximal_only, options.budget, options.seed);
  if (options.maximal_only)
    report.note =
        "maximal-only: recovery is monotone under erasure removal, so maximal "
        "admissible patterns cover all admissible patterns";
  return report;
}

inline nlohmann::json verify_results_json(const VerifyReport& report) {
  nlohmann::json j{{"a", report.options.params.a},
                   {"b", report.options.params.b},
                   {"tau", report.options.params.tau},
                   {"horizon", report.options.horizon},
                   {"maximal_only", report.options.maximal_only},
                   {"vector", report.vector.entries()},
                   {"n", report.n},
                   {"k", report.k},
                   {"patterns_checked", report.result.patterns_checked},
                   {"verdict", report.result.pass ? "PASS" : "FAIL"}};
  if (!report.note.empty()) j["note"] = report.note;
  if (!report.result.pass) {
    j["counterexample"] = report.result.counterexample->to_json();
    j["failing_time"] = report.result.failing_time;
    j["detail"] = report.result.detail;
  }
  return j;
}

inline std::string verify_csv(const VerifyReport& report) {
  std::string out = detail::csv_join({"a", "b", "tau", "horizon", "maximal_only", "n", "k",
                                      "patterns_checked", "verdict", "failing_time",
                                      "counterexample"});
  out += detail::csv_join(
      {std::to_string(report.options.params.a), std::to_string(report.options.params.b),
       std::to_string(report.options.params.tau), std::to_string(report.options.horizon),
       report.options.maximal_only ? "true" : "false", std::to_string(report.n),
       std::to_string(report.k), std::to_string(report.result.patterns_checked),
       report.result.pass ? "PASS" : "FAIL",
       report.result.pass ? "" : std::to_string(report.result.failing_time),
       report.result.pass ? "" : "\"" + report.result.counterexample->to_text() + "\""});
  return out;
}

// --------------------------------------------------------------- oracle ----

struct OracleOptions {
  int tau_max = 0;
  int entry_bound = 4;
  std::uint64_t budget = kDefaultBudget;
  int threads = 1;
};

struct OracleRow {
  ChannelParams params;
  Rational oracle_rate;
  Rational theorem_rate;
  bool match = false;
  DispersionVector witness{std::vector<std::int64_t>{1}};
  std::uint64_t vectors_scored = 0;
};

struct OracleReport {
  OracleOptions options;
  std::vector<OracleRow> rows;
  bool all_match = true;
};

inline OracleReport cmd_oracle(const OracleOptions& options) {
  if (options.tau_max < 1) fail(ErrorCode::kInvalidParams, "tau_max must be >= 1");
  OracleReport report;
  report.options = options;
  for (int tau = 1; tau <= options.tau_max; ++tau)
    for (int b = 1; b <= tau; ++b)
      for (int a = 1; a <= b; ++a) {
        const ChannelParams params{a, b, tau};
        OracleResult oracle = brute_force_max_rate(params, options.entry_bound,
                                                   options.budget, options.threads);
        OracleRow row;
        row.params = params;
        row.oracle_rate = oracle.rate;
        row.theorem_rate = max_gsde_rate(params);
        row.match = row.oracle_rate == row.theorem_rate;
        row.witness = std::move(oracle.witness);
        row.vectors_scored = oracle.vectors_scored;
        report.all_match = report.all_match && row.match;
        report.rows.push_back(std::move(row));
      }
  return report;
}

inline std::string oracle_csv(const OracleReport& report) {
  std::string out = detail::csv_join({"a", "b", "tau", "entry_bound", "oracle_rate",
                                      "theorem_rate", "match", "witness", "vectors_scored"});
  for (const auto& row : report.rows)
    out += detail::csv_join(
        {std::to_string(row.params.a), std::to_string(row.params.b),
         std::to_string(row.params.tau), std::to_string(report.options.entry_bound),
         row.oracle_rate.to_string(), row.theorem_rate.to_string(),
         row.match ? "true" : "false", "\"" + row.witness.to_text() + "\"",
         std::to_string(row.vectors_scored)});
  return out;
}

inline nlohmann::json oracle_results_json(const OracleReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"a", row.params.a},
                    {"b", row.params.b},
                    {"tau", row.params.tau},
                    {"oracle_rate", row.oracle_rate.to_string()},
                    {"theorem_rate", row.theorem_rate.to_string()},
                    {"match", row.match},
                    {"witness", row.witness.entries()},
                    {"vectors_scored", row.vectors_scored}});
  return nlohmann::json{{"entry_bound", report.options.entry_bound},
                        {"all_match", report.all_match},
                        {"rows", std::move(rows)}};
}

// ------------------------------------------------------------- simulate ----

struct SimulateOptions {
  ChannelParams params;
  GeConfig ge;
  std::int64_t length = 1000;
  int trials = 10;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

struct TrialStats {
  std::int64_t packets = 0;
  std::int64_t erased = 0;
  std::int64_t scored = 0;
  std::int64_t on_time = 0;
  std::int64_t late = 0;
  std::int64_t failed = 0;

  TrialStats& operator+=(const TrialStats& other) {
    packets += other.packets;
    erased += other.erased;
    scored += other.scored;
    on_time += other.on_time;
    late += other.late;
    failed += other.failed;
    return *this;
  }
};

struct SimulateRow {
  int trial = 0;
  std::string code;
  TrialStats stats;
};

struct SimulateReport {
  SimulateOptions options;
  DispersionVector staggered{std::vector<std::int64_t>{1}};
  DispersionVector baseline{std::vector<std::int64_t>{1}};
  std::vector<SimulateRow> rows;
  TrialStats total_staggered;
  TrialStats total_baseline;
};

namespace detail {

inline TrialStats run_stream_trial(const MdsCode& code, const DispersionVector& dv,
                                   const ChannelParams& params, const ErasurePattern& pattern,
                                   std::uint64_t message_seed) {
  TrialStats stats;
  stats.packets = pattern.horizon;
  stats.erased = static_cast<std::int64_t>(pattern.erased.size());
  stats.scored = std::max<std::int64_t>(0, pattern.horizon - params.tau);

  std::mt19937_64 rng(message_seed);
  Encoder encoder(code, dv);
  Receiver receiver(code, dv);
  std::vector<std::uint16_t> message(code.k());
  for (std::int64_t t = 0; t < pattern.horizon; ++t) {
    for (auto& s : message) s = static_cast<std::uint16_t>(rng() % code.field().order());
    StreamPacket packet = encoder.step(message);
    if (pattern.contains(t)) {
      packet.erased = true;
      packet.symbols.clear();
    }
    for (const auto& event : receiver.step(packet)) {
      if (event.t < 0 || event.t >= stats.scored) continue;
      if (event.status == DecodeStatus::kOnTime)
        ++stats.on_time;
      else if (event.status == DecodeStatus::kLate)
        ++stats.late;
    }
  }
  stats.failed = stats.scored - stats.on_time - stats.late;
  return stats;
}

}  // namespace detail

// Runs the staggered construction and the 0/1 baseline over the same sampled
// loss patterns. Trial results are assembled in trial order, so the report is
// byte-identical for any thread count.
inline SimulateReport cmd_simulate(const SimulateOptions& options) {
  ChannelParams::make(options.params.a, options.params.b, options.params.tau);
  if (options.trials < 1) fail(ErrorCode::kInvalidParams, "trials must be >= 1");
  if (options.length < options.params.window())
    fail(ErrorCode::kInvalidParams, "length must be at least tau + 1");

  SimulateReport report;
  report.options = options;
  Construction staggered = best_dispersion(options.params);
  Construction baseline = construction1(options.params);
  report.staggered = staggered.vector;
  report.baseline = baseline.vector;

  const Gf& stag_field = Gf::for_order(field_order_for(staggered.report.n));
  const Gf& base_field = Gf::for_order(field_order_for(baseline.report.n));
  const MdsCode stag_code =
      MdsCode::build(static_cast<int>(staggered.report.n),
                     static_cast<int>(staggered.report.n - staggered.report.r), stag_field);
  const MdsCode base_code =
      MdsCode::build(static_cast<int>(baseline.report.n),
                     static_cast<int>(baseline.report.n - baseline.report.r), base_field);

  struct TrialOutcome {
    TrialStats staggered;
    TrialStats baseline;
  };
  std::vector<TrialOutcome> outcomes(options.trials);
  auto run_trial = [&](int trial) {
    GeConfig config = options.ge;
    config.seed = mix_seed(options.ge.seed, static_cast<std::uint64_t>(trial));
    const ErasurePattern pattern = ge_sample(config, options.length);
    const std::uint64_t stag_seed = mix_seed(options.seed, 2 * trial);
    const std::uint64_t base_seed = mix_seed(options.seed, 2 * trial + 1);
    outcomes[trial].staggered = detail::run_stream_trial(stag_code, staggered.vector,
                                                         options.params, pattern, stag_seed);
    outcomes[trial].baseline = detail::run_stream_trial(base_code, baseline.vector,
                                                        options.params, pattern, base_seed);
  };

  const int workers =
      std::min<int>(detail::resolve_threads(options.threads), options.trials);
  if (workers <= 1) {
    for (int trial = 0; trial < options.trials; ++trial) run_trial(trial);
  } else {
    std::vector<std::future<void>> futures;
    for (int w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (int trial = w; trial < options.trials; trial += workers) run_trial(trial);
      }));
    for (auto& f : futures) f.get();
  }

  for (int trial = 0; trial < options.trials; ++trial) {
    report.rows.push_back(SimulateRow{trial, "staggered", outcomes[trial].staggered});
    report.rows.push_back(SimulateRow{trial, "baseline", outcomes[trial].baseline});
    report.total_staggered += outcomes[trial].staggered;
    report.total_baseline += outcomes[trial].baseline;
  }
  return report;
}

inline std::string simulate_csv(const SimulateReport& report) {
  const auto& o = report.options;
  std::string out;
  out += "# simulate a=" + std::to_string(o.params.a) + " b=" + std::to_string(o.params.b) +
         " tau=" + std::to_string(o.params.tau) + " length=" + std::to_string(o.length) +
         " trials=" + std::to_string(o.trials) + " seed=" + std::to_string(o.seed) + "\n";
  out += "# ge p_good_to_bad=" + std::to_string(o.ge.p_good_to_bad) +
         " p_bad_to_good=" + std::to_string(o.ge.p_bad_to_good) +
         " loss_good=" + std::to_string(o.ge.loss_good) +
         " loss_bad=" + std::to_string(o.ge.loss_bad) +
         " seed=" + std::to_string(o.ge.seed) + "\n";
  out += detail::csv_join(
      {"trial", "code", "packets", "erased", "scored", "on_time", "late", "failed"});
  auto emit = [&](const std::string& trial, const std::string& code, const TrialStats& s) {
    out += detail::csv_join({trial, code, std::to_string(s.packets), std::to_string(s.erased),
                             std::to_string(s.scored), std::to_string(s.on_time),
                             std::to_string(s.late), std::to_string(s.failed)});
  };
  for (const auto& row : report.rows) emit(std::to_string(row.trial), row.code, row.stats);
  emit("all", "staggered", report.total_staggered);
  emit("all", "baseline", report.total_baseline);
  return out;
}

inline nlohmann::json simulate_results_json(const SimulateReport& report) {
  auto stats_json = [](const TrialStats& s) {
    return nlohmann::json{{"packets", s.packets}, {"erased", s.erased},
                          {"scored", s.scored},   {"on_time", s.on_time},
                          {"late", s.late},       {"failed", s.failed}};
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json j = stats_json(row.stats);
    j["trial"] = row.trial;
    j["code"] = row.code;
    rows.push_back(std::move(j));
  }
  return nlohmann::json{{"staggered_vector", report.staggered.entries()},
                        {"baseline_vector", report.baseline.entries()},
                        {"rows", std::move(rows)},
                        {"total_staggered", stats_json(report.total_staggered)},
                        {"total_baseline", stats_json(report.total_baseline)}};
}

}  // namespace gss
