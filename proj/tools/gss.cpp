#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gss/commands.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct GlobalOptions {
  std::string format;  // per-command default when empty
  std::string out_path;
  std::uint64_t seed = gss::kDefaultSeed;
  int threads = 1;
  std::uint64_t budget = gss::kDefaultBudget;
};

void write_output(const GlobalOptions& global, const std::string& text) {
  if (global.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(global.out_path, std::ios::binary);
  if (!out) gss::fail(gss::ErrorCode::kBadInput, "cannot open '" + global.out_path + "'");
  out << text;
}

std::string pick_format(const GlobalOptions& global, const std::string& fallback) {
  if (global.format.empty()) return fallback;
  return global.format;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t budget_from_env() {
  const char* raw = std::getenv("GSS_BUDGET");
  if (raw == nullptr) return gss::kDefaultBudget;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0)
    gss::fail(gss::ErrorCode::kBadInput, std::string("bad GSS_BUDGET '") + raw + "'");
  return value;
}

gss::GeConfig load_ge_config(const std::string& path, std::uint64_t fallback_seed) {
  if (path.empty()) {
    gss::GeConfig config;  // toolkit defaults
    config.seed = fallback_seed;
    return config;
  }
  std::ifstream in(path);
  if (!in) gss::fail(gss::ErrorCode::kBadInput, "cannot read '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    gss::fail(gss::ErrorCode::kBadInput, "bad json in '" + path + "': " + e.what());
  }
  return gss::GeConfig::from_json(j);
}

nlohmann::json params_json(const gss::ChannelParams& p) {
  return nlohmann::json{{"a", p.a}, {"b", p.b}, {"tau", p.tau}};
}

int run(int argc, char** argv) {
  CLI::App app{"streaming erasure-code toolkit: staggered-diagonal MDS dispersions"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  global.budget = budget_from_env();
  app.add_option("--format", global.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", global.out_path, "write output to this file instead of stdout");
  app.add_option("--seed", global.seed, "master seed for randomized runs");
  app.add_option("--threads", global.threads,
                 "worker threads (0 = hardware concurrency)");

  int a = 0, b = 0, tau = 0;
  std::string sweep;
  auto* rates = app.add_subcommand("rates", "rate formulas and regime per channel triple");
  rates->add_option("--a", a, "max arbitrary erasures per window");
  rates->add_option("--b", b, "max burst length per window");
  rates->add_option("--tau", tau, "decoding deadline");
  rates->add_option("--sweep", sweep, "ranged triples, e.g. \"a=1..3 b=3 tau=6\"");

  auto* construct = app.add_subcommand("construct", "dispersion vector for a channel triple");
  construct->add_option("--a", a)->required();
  construct->add_option("--b", b)->required();
  construct->add_option("--tau", tau)->required();

  std::int64_t horizon = 0;
  bool maximal_only = false;
  int k_override = 0;
  auto* verify = app.add_subcommand("verify", "exhaustive decode check over admissible patterns");
  verify->add_option("--a", a)->required();
  verify->add_option("--b", b)->required();
  verify->add_option("--tau", tau)->required();
  verify->add_option("--horizon", horizon, "stream length to check")->required();
  verify->add_flag("--maximal-only", maximal_only, "enumerate only maximal patterns");
  verify->add_option("--k-override", k_override,
                     "override message length k (for deliberately weakened codes)");

  int tau_max = 0;
  int entry_bound = 4;
  auto* oracle = app.add_subcommand("oracle", "brute-force rate search vs. theorem rates");
  oracle->add_option("--tau-max", tau_max, "check all triples with tau up to this")->required();
  oracle->add_option("--entry-bound", entry_bound, "largest per-slot entry searched");

  std::int64_t length = 1000;
  int trials = 10;
  std::string ge_path;
  auto* simulate = app.add_subcommand("simulate", "loss-model comparison of both constructions");
  simulate->add_option("--a", a)->required();
  simulate->add_option("--b", b)->required();
  simulate->add_option("--tau", tau)->required();
  simulate->add_option("--length", length, "packets per trial");
  simulate->add_option("--trials", trials, "number of trials");
  simulate->add_option("--ge-config", ge_path, "gilbert-elliott config json (all fields)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = Clock::now();

  if (rates->parsed()) {
    std::vector<gss::ChannelParams> triples;
    nlohmann::json inputs;
    if (!sweep.empty()) {
      triples = gss::parse_sweep(sweep);
      inputs["sweep"] = sweep;
    } else {
      triples.push_back(gss::ChannelParams::make(a, b, tau));
      inputs["params"] = params_json(triples.front());
    }
    const gss::RatesReport report = gss::cmd_rates(triples);
    if (pick_format(global, "csv") == "csv")
      write_output(global, gss::rates_csv(report));
    else
      write_output(global, gss::make_report("rates", inputs, gss::rates_results_json(report),
                                            elapsed_ms(start))
                               .dump(2) +
                           "\n");
    return 0;
  }

  if (construct->parsed()) {
    const gss::ConstructReport report =
        gss::cmd_construct(gss::ChannelParams::make(a, b, tau));
    if (pick_format(global, "json") == "csv")
      write_output(global, gss::construct_csv(report));
    else
      write_output(global,
                   gss::make_report("construct", params_json(report.params),
                                    gss::construct_results_json(report), elapsed_ms(start))
                       .dump(2) +
                       "\n");
    return 0;
  }

  if (verify->parsed()) {
    gss::VerifyOptions options;
    options.params = gss::ChannelParams::make(a, b, tau);
    options.horizon = horizon;
    options.maximal_only = maximal_only;
    options.k_override = k_override;
    options.budget = global.budget;
    options.seed = global.seed;
    const gss::VerifyReport report = gss::cmd_verify(options);
    nlohmann::json inputs = params_json(options.params);
    inputs["horizon"] = horizon;
    inputs["maximal_only"] = maximal_only;
    inputs["seed"] = options.seed;
    if (k_override > 0) inputs["k_override"] = k_override;
    if (pick_format(global, "json") == "csv")
      write_output(global, gss::verify_csv(report));
    else
      write_output(global, gss::make_report("verify", inputs,
                                            gss::verify_results_json(report), elapsed_ms(start))
                               .dump(2) +
                           "\n");
    return report.result.pass ? 0 : 1;
  }

  if (oracle->parsed()) {
    gss::OracleOptions options;
    options.tau_max = tau_max;
    options.entry_bound = entry_bound;
    options.budget = global.budget;
    options.threads = global.threads;
    const gss::OracleReport report = gss::cmd_oracle(options);
    nlohmann::json inputs{{"tau_max", tau_max}, {"entry_bound", entry_bound}};
    if (pick_format(global, "csv") == "csv")
      write_output(global, gss::oracle_csv(report));
    else
      write_output(global, gss::make_report("oracle", inputs,
                                            gss::oracle_results_json(report), elapsed_ms(start))
                               .dump(2) +
                           "\n");
    return report.all_match ? 0 : 1;
  }

  if (simulate->parsed()) {
    gss::SimulateOptions options;
    options.params = gss::ChannelParams::make(a, b, tau);
    options.ge = load_ge_config(ge_path, global.seed);
    options.length = length;
    options.trials = trials;
    options.seed = global.seed;
    options.threads = global.threads;
    const gss::SimulateReport report = gss::cmd_simulate(options);
    nlohmann::json inputs = params_json(options.params);
    inputs["length"] = length;
    inputs["trials"] = trials;
    inputs["seed"] = options.seed;
    inputs["ge"] = options.ge.to_json();
    inputs["ge_defaults_used"] = ge_path.empty();
    if (pick_format(global, "csv") == "csv")
      write_output(global, gss::simulate_csv(report));
    else
      write_output(global, gss::make_report("simulate", inputs,
                                            gss::simulate_results_json(report),
                                            elapsed_ms(start))
                               .dump(2) +
                           "\n");
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == gss::ErrorCode::kBudgetExceeded ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
