#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "crancap/channel_file.hpp"
#include "crancap/discrete_bounds.hpp"
#include "crancap/gaussian_bounds.hpp"
#include "crancap/scheme_sim.hpp"
#include "crancap/sweep.hpp"
#include "crancap/util.hpp"
#include "crancap/verify.hpp"

namespace {

using namespace crancap;

// Exit codes: 0 success, 2 command-line usage, 3 rejected input or guard,
// 4 verification failure, 5 I/O failure.

// Runs body against stdout or the --out target; a relative --out lands in
// $CRANCAP_OUT_DIR when that is set.
int with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    return 0;
  }
  std::string full = path;
  const char* dir = std::getenv("CRANCAP_OUT_DIR");
  if (dir && *dir && path.front() != '/') full = std::string(dir) + "/" + path;
  std::ofstream file(full);
  if (!file) {
    std::cerr << "error: cannot open '" << full << "' for writing\n";
    return 5;
  }
  body(file);
  file.flush();
  if (!file) {
    std::cerr << "error: failed writing '" << full << "'\n";
    return 5;
  }
  return 0;
}

ChannelSpec load_or_default(const std::string& path) {
  if (path.empty()) {
    ChannelSpec spec;
    spec.mac = binary_adder_mac(2);
    spec.pmf = SymmetricPmf{2, 2, {0.25, 0.25, 0.25, 0.25}};
    spec.has_pmf = true;
    return spec;
  }
  return load_channel_file(path);
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct SweepArgs {
  int relays = 2;
  double power = 1.0;
  double cmin = 0.0;
  double cmax = 1.0;
  int steps = 21;
  int threads = 0;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  std::vector<SweepRow> rows =
      gaussian_sweep(a.relays, a.power, a.cmin, a.cmax, a.steps, {}, a.threads);
  return with_output(a.out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
}

int run_regimes(int relays, double power) {
  GaussianNetwork probe{relays, power, 0.0};
  probe.validate();
  RegimeReport r = regimes(relays, power);
  std::cout << "M " << relays << "  P " << fmt12(power) << "\n"
            << "C_C    " << fmt6(r.c_c) << "\n"
            << "C_L    " << fmt6(r.c_l) << "\n"
            << "C_U    " << fmt6(r.c_u) << "\n"
            << "C_coop " << fmt6(r.c_coop) << "\n"
            << "rho2   " << fmt6(r.rho2) << "\n"
            << "[0.000000, " << fmt6(r.c_c) << "]  " << regime_name(Regime::cutset_tight) << "\n"
            << "(" << fmt6(r.c_c) << ", " << fmt6(r.c_l) << ")  "
            << regime_name(Regime::gap_unknown_low) << "\n"
            << "[" << fmt6(r.c_l) << ", " << fmt6(r.c_u) << "]  "
            << regime_name(Regime::window_tight) << "\n"
            << "(" << fmt6(r.c_u) << ", " << fmt6(r.c_coop) << ")  "
            << regime_name(Regime::gap_unknown_high) << "\n"
            << "[" << fmt6(r.c_coop) << ", inf)  " << regime_name(Regime::full_coop_tight)
            << "\n";
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<SuiteResult> results = run_suites(suite, seed);
  int failures = 0;
  for (const SuiteResult& r : results) {
    std::cout << "suite " << r.suite << ": " << r.checks << " checks, " << r.failures
              << " failures\n";
    for (const std::string& note : r.notes) std::cout << "  " << note << "\n";
    failures += r.failures;
  }
  std::cout << "verify: " << (failures == 0 ? "PASS" : "FAIL") << "\n";
  return failures == 0 ? 0 : 4;
}

struct SimulateArgs {
  std::string channel;
  std::string blocks = "4,8,12,16";
  double rate = 0.45;
  double rprime = 0.0;
  double epsilon = 1.375;
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  ChannelSpec spec = load_or_default(a.channel);
  if (!spec.has_pmf)
    throw std::domain_error("simulate needs a channel file with a pmf section");
  std::vector<int> blocks;
  {
    std::string tok;
    std::istringstream ss(a.blocks);
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        int n = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        blocks.push_back(n);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad block length '" + tok + "' in --n");
      }
    }
    if (blocks.empty()) throw std::invalid_argument("--n lists no block lengths");
  }

  std::vector<SchemeCounts> counts;
  counts.reserve(blocks.size());
  for (int n : blocks) {
    SchemeParams params{n, a.rate, a.rprime, a.epsilon};
    counts.push_back(run_trials(spec.mac, spec.pmf, params, a.trials, a.seed, a.threads));
  }
  return with_output(a.out, [&](std::ostream& os) {
    os << "n,rate,r_prime,trials,encode_fail_rate,error_rate\n";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const SchemeCounts& c = counts[i];
      double denom = c.trials > 0 ? static_cast<double>(c.trials) : 1.0;
      os << blocks[i] << ',' << fmt12(a.rate) << ',' << fmt12(a.rprime) << ',' << c.trials << ','
         << fmt12(static_cast<double>(c.encode_failures) / denom) << ','
         << fmt12(static_cast<double>(c.decode_errors) / denom) << '\n';
    }
  });
}

int run_discrete_lb(const std::string& channel, double fronthaul, int restarts, int sweeps,
                    std::uint64_t seed) {
  ChannelSpec spec = load_or_default(channel);
  RateSearchOptions opts;
  opts.restarts = restarts;
  opts.max_sweeps = sweeps;
  opts.seed = seed;
  RateSearchResult res = optimize_symmetric_rate(spec.mac, fronthaul, opts);
  std::cout << "rate " << fmt12(res.rate_bits) << "\n"
            << "status " << (res.status == SearchStatus::converged ? "converged" : "grid-limited")
            << "\n"
            << "pmf";
  for (double v : res.pmf.probs) std::cout << ' ' << fmt12(v);
  std::cout << "\n";
  return 0;
}

int run_discrete_ub(const std::string& channel, double fronthaul, const MinimaxOptions& opts) {
  ChannelSpec spec = load_or_default(channel);
  MinimaxResult res = minimax_upper(spec.mac, fronthaul, opts);
  std::cout << "value " << fmt12(res.value_bits) << "\n"
            << "status " << (res.status == SearchStatus::converged ? "converged" : "grid-limited")
            << "\n"
            << "input";
  for (double v : res.input.p) std::cout << ' ' << fmt12(v);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounds, regime maps, and link-level simulation for a symmetric relay downlink"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep both Gaussian bounds over fronthaul");
  sweep_cmd->add_option("--M", sweep_args.relays, "number of relays");
  sweep_cmd->add_option("--P", sweep_args.power, "per-relay transmit power");
  sweep_cmd->add_option("--cmin", sweep_args.cmin, "smallest fronthaul capacity, bits");
  sweep_cmd->add_option("--cmax", sweep_args.cmax, "largest fronthaul capacity, bits");
  sweep_cmd->add_option("--steps", sweep_args.steps, "grid points");
  sweep_cmd->add_option("--threads", sweep_args.threads, "worker threads, 0 = all cores");
  sweep_cmd->add_option("--out", sweep_args.out, "CSV path (stdout when omitted)");

  int reg_relays = 2;
  double reg_power = 1.0;
  CLI::App* regimes_cmd = app.add_subcommand("regimes", "print the fronthaul regime thresholds");
  regimes_cmd->add_option("--M", reg_relays, "number of relays");
  regimes_cmd->add_option("--P", reg_power, "per-relay transmit power");

  std::string verify_suite = "all";
  std::uint64_t verify_seed = 1;
  std::vector<std::string> suite_choices = suite_names();
  suite_choices.push_back("all");
  CLI::App* verify_cmd = app.add_subcommand("verify", "run randomized self-check suites");
  verify_cmd->add_option("--suite", verify_suite, "suite name")
      ->check(CLI::IsMember(suite_choices));
  verify_cmd->add_option("--seed", verify_seed, "base random seed");

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the covering scheme trial by trial");
  sim_cmd->add_option("--channel", sim_args.channel, "channel description file");
  sim_cmd->add_option("--n", sim_args.blocks, "comma-separated block lengths");
  sim_cmd->add_option("--rate", sim_args.rate, "message rate per relay, bits");
  sim_cmd->add_option("--rprime", sim_args.rprime, "covering excess per relay, bits");
  sim_cmd->add_option("--epsilon", sim_args.epsilon, "type slack");
  sim_cmd->add_option("--trials", sim_args.trials, "trials per block length");
  sim_cmd->add_option("--seed", sim_args.seed, "base random seed");
  sim_cmd->add_option("--threads", sim_args.threads, "worker threads, 0 = all cores");
  sim_cmd->add_option("--out", sim_args.out, "CSV path (stdout when omitted)");

  std::string lb_channel;
  double lb_fronthaul = 0.5;
  int lb_restarts = 12;
  int lb_sweeps = 60;
  std::uint64_t lb_seed = 1;
  CLI::App* lb_cmd =
      app.add_subcommand("discrete-lb", "optimize the symmetric achievable rate");
  lb_cmd->add_option("--channel", lb_channel, "channel description file");
  lb_cmd->add_option("--C", lb_fronthaul, "fronthaul capacity per relay, bits");
  lb_cmd->add_option("--restarts", lb_restarts, "random restarts");
  lb_cmd->add_option("--sweeps", lb_sweeps, "max climb sweeps per restart");
  lb_cmd->add_option("--seed", lb_seed, "base random seed");

  std::string ub_channel;
  double ub_fronthaul = 0.5;
  MinimaxOptions ub_opts;
  CLI::App* ub_cmd = app.add_subcommand("discrete-ub", "evaluate the converse bound");
  ub_cmd->add_option("--channel", ub_channel, "channel description file");
  ub_cmd->add_option("--C", ub_fronthaul, "fronthaul capacity per relay, bits");
  ub_cmd->add_option("--digest", ub_opts.digest_symbols, "digest alphabet, 0 = cardinality cap");
  ub_cmd->add_option("--coord", ub_opts.coord_symbols, "coordination alphabet, 0 = cap");
  ub_cmd->add_option("--starts", ub_opts.input_starts, "input pmf starts");
  ub_cmd->add_option("--rounds", ub_opts.rounds, "descent/ascent rounds per digest start");
  ub_cmd->add_option("--sweeps", ub_opts.max_sweeps, "climb sweeps per ascent");
  ub_cmd->add_option("--seed", ub_opts.seed, "base random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sweep_cmd->parsed()) return run_sweep(sweep_args);
    if (regimes_cmd->parsed()) return run_regimes(reg_relays, reg_power);
    if (verify_cmd->parsed()) return run_verify(verify_suite, verify_seed);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (lb_cmd->parsed())
      return run_discrete_lb(lb_channel, lb_fronthaul, lb_restarts, lb_sweeps, lb_seed);
    if (ub_cmd->parsed()) return run_discrete_ub(ub_channel, ub_fronthaul, ub_opts);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.line == 0 ? 5 : 3;
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
