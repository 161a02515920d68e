#include "crahnflood/cli.hpp"

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "crahnflood/config.hpp"
#include "crahnflood/csv.hpp"
#include "crahnflood/epidemic.hpp"
#include "crahnflood/errors.hpp"
#include "crahnflood/params.hpp"
#include "crahnflood/planner.hpp"
#include "crahnflood/sim.hpp"
#include "crahnflood/spectrum.hpp"
#include "crahnflood/sweep.hpp"
#include "crahnflood/version.hpp"

namespace crahn {
namespace {

struct Options {
  std::string config_path;
  std::uint64_t seed = 12345;
  int threads = 0;
  std::string scheme = "static";
  std::string recovery = "hybrid";
  double ode_timer = 65.0;
  double step = 0.0;
  long stride = 1;
  long timer = 65;
  long rounds = 2000;
  bool full = false;
  bool no_anti = false;
  std::string out;
  std::string out_dir = ".";
  double eps_t = kDefaultEpsT;
  double beta_th = kDefaultBetaTh;
  std::string axis = "5:65:5";
};

SystemParams load_params(const Options& o) {
  return o.config_path.empty() ? table1() : load_config(o.config_path);
}

SweepAxis parse_axis(const std::string& text) {
  SweepAxis a;
  if (std::sscanf(text.c_str(), "%ld:%ld:%ld", &a.from, &a.to, &a.step) != 3)
    fail(Errc::kBadConfig, "sweep axis must be from:to:step, got '" + text + "'");
  return a;
}

SimConfig sim_config(const Options& o, const SystemParams& sp) {
  SimConfig cfg;
  cfg.params = sp;
  cfg.scheme = parse_scheme(o.scheme);
  cfg.recovery = parse_recovery(o.recovery);
  cfg.timer = o.timer;
  cfg.rounds = o.rounds;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.anti_contention = !o.no_anti;
  return cfg;
}

void run_derive(const Options& o) {
  SystemParams sp = load_params(o);
  SpectrumDerived d = derive(validate(sp));
  CsvWriter w(o.out, "key,value", config_hash(sp), o.seed);
  auto kv = [&w](const char* k, double v) {
    w.line(std::string(k) + "," + CsvWriter::format(v));
  };
  kv("lambda_tilde", d.lambda_tilde);
  kv("sigma", d.sigma);
  kv("p_tilde", d.p_tilde);
  kv("avoidance_gain", d.avoidance_gain);
  kv("lambda_hat", d.lambda_hat);
  kv("p_hat", d.p_hat);
  kv("beta", d.beta);
  kv("k5", d.k5);
  kv("beta_p_hat", d.beta_p_hat);
  kv("clamped", d.clamped ? 1.0 : 0.0);
}

void run_ode(const Options& o) {
  SystemParams sp = load_params(o);
  ValidatedParams vp = validate(sp);
  EpidemicConfig cfg =
      config_from(vp, parse_scheme(o.scheme), parse_recovery(o.recovery), o.ode_timer);
  if (o.step > 0) cfg.step = o.step;
  Trajectory tr = integrate(cfg);
  CsvWriter w(o.out, "t,S,I,R,P", config_hash(sp), o.seed);
  long stride = o.stride < 1 ? 1 : o.stride;
  long n = static_cast<long>(tr.states.size());
  for (long k = 0; k < n; k += stride) {
    const EpidemicState& s = tr.states[k];
    w.row({s.t, s.s, s.i, s.r, s.p});
  }
  if ((n - 1) % stride != 0) {
    const EpidemicState& s = tr.back();
    w.row({s.t, s.s, s.i, s.r, s.p});
  }
}

void run_plan(const Options& o) {
  SystemParams sp = load_params(o);
  PlanResult pr = plan(validate(sp), o.eps_t, parse_scheme(o.scheme), o.beta_th);
  CsvWriter w(o.out, "key,value", config_hash(sp), o.seed);
  w.comment("scheme=" + o.scheme + " eps_t=" + CsvWriter::format(o.eps_t));
  auto kv = [&w](const char* k, double v) {
    w.line(std::string(k) + "," + CsvWriter::format(v));
  };
  kv("t_star", pr.t_star);
  kv("p_su_star", pr.p_su_star);
  kv("beta_th", pr.beta_th);
  kv("p_at_t_star", pr.p_at_t_star);
  kv("q_at_t_star", pr.q_at_t_star);
}

std::string summary_path(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".summary.csv";
  return out + ".summary";
}

void run_sim(const Options& o) {
  SystemParams sp = load_params(o);
  SimConfig cfg = sim_config(o, sp);
  RunMetrics m = run(cfg);
  std::uint64_t hash = config_hash(sp);
  {
    CsvWriter w(o.out, "frame,mean_S,mean_I,mean_R,se_I", hash, o.seed);
    for (long f = 0; f <= cfg.timer; ++f)
      w.row({static_cast<double>(f), m.mean_s[f], m.mean_i[f], m.mean_r[f], m.se_i[f]});
  }
  {
    CsvWriter w(summary_path(o.out), "P_T,Q_T,mean_T_D,rounds,seed", hash, o.seed);
    w.line(CsvWriter::format(m.p_t) + "," + CsvWriter::format(m.q_t) + "," +
           CsvWriter::format(m.mean_t_d) + "," + std::to_string(m.rounds) + "," +
           std::to_string(m.seed));
  }
}

void run_sweep_cmd(const Options& o) {
  SystemParams sp = load_params(o);
  SimConfig cfg = sim_config(o, sp);
  write_sweep_csv(cfg, parse_axis(o.axis), o.out);
}

void run_figures(const Options& o) {
  SystemParams sp = load_params(o);
  SimConfig cfg = sim_config(o, sp);
  for (const std::string& p : write_figures(cfg, o.out_dir)) std::cerr << p << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  Options o;
  CLI::App app{"interference-aware flooding analysis for cognitive radio ad hoc networks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto add_common = [&o](CLI::App* c) {
    c->add_option("--config", o.config_path,
                  "key=value parameter file (omitted: built-in reference set)");
    c->add_option("--seed", o.seed, "master RNG seed");
    c->add_option("--threads", o.threads, "worker threads (<=0: all cores)");
  };
  auto add_rounds = [&o](CLI::App* c) {
    CLI::Option* r = c->add_option("--rounds", o.rounds, "Monte Carlo rounds");
    c->add_flag("--full", o.full, "full-scale rounds (20000) unless --rounds is given");
    c->add_flag("--no-anti-contention", o.no_anti,
                "drop antipacket transmissions from the interference sum");
    return r;
  };

  CLI::App* derive_cmd =
      app.add_subcommand("derive", "spectrum-aware density, activation, and neighbor rates");
  add_common(derive_cmd);
  derive_cmd->add_option("--out", o.out, "output CSV (default stdout)");
  derive_cmd->callback([&o] { run_derive(o); });

  CLI::App* ode_cmd = app.add_subcommand("ode", "mean-field flooding dynamics");
  add_common(ode_cmd);
  ode_cmd->add_option("--scheme", o.scheme, "static|mobile");
  ode_cmd->add_option("--recovery", o.recovery, "hybrid|timeout|none");
  ode_cmd->add_option("--timer", o.ode_timer, "global timeout T [frames]");
  ode_cmd->add_option("--step", o.step, "RK4 step (default 0.01*t_frame)");
  ode_cmd->add_option("--stride", o.stride, "record every k-th step");
  ode_cmd->add_option("--out", o.out, "output CSV (default stdout)");
  ode_cmd->callback([&o] { run_ode(o); });

  CLI::App* plan_cmd =
      app.add_subcommand("plan", "optimal timer and transmit power for a delivery target");
  add_common(plan_cmd);
  plan_cmd->add_option("--scheme", o.scheme, "static|mobile");
  plan_cmd->add_option("--eps-t", o.eps_t, "residual outage target");
  plan_cmd->add_option("--beta-th", o.beta_th, "neighbor-rate threshold for the power rule");
  plan_cmd->add_option("--out", o.out, "output CSV (default stdout)");
  plan_cmd->callback([&o] { run_plan(o); });

  CLI::App* sim_cmd = app.add_subcommand("sim", "Monte Carlo flooding rounds");
  add_common(sim_cmd);
  sim_cmd->add_option("--scheme", o.scheme, "static|mobile");
  sim_cmd->add_option("--recovery", o.recovery, "hybrid|timeout|none");
  sim_cmd->add_option("--timer", o.timer, "global timeout T [frames]");
  CLI::Option* sim_rounds = add_rounds(sim_cmd);
  sim_cmd->add_option("--out", o.out, "dynamics CSV path (summary lands beside it)")
      ->required();
  sim_cmd->callback([&o, sim_rounds] {
    if (o.full && sim_rounds->count() == 0) o.rounds = 20000;
    run_sim(o);
  });

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "timer sweep, ODE vs simulation");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--scheme", o.scheme, "static|mobile");
  sweep_cmd->add_option("--recovery", o.recovery, "hybrid|timeout|none");
  sweep_cmd->add_option("--axis", o.axis, "timer axis from:to:step");
  CLI::Option* sweep_rounds = add_rounds(sweep_cmd);
  sweep_cmd->add_option("--out", o.out, "output CSV (default stdout)");
  sweep_cmd->callback([&o, sweep_rounds] {
    if (o.full && sweep_rounds->count() == 0) o.rounds = 20000;
    run_sweep_cmd(o);
  });

  CLI::App* fig_cmd = app.add_subcommand("figures", "emit the standard comparison CSV set (dynamics + timer sweeps)");
  add_common(fig_cmd);
  fig_cmd->add_option("--recovery", o.recovery, "hybrid|timeout|none");
  CLI::Option* fig_rounds = add_rounds(fig_cmd);
  fig_cmd->add_option("--out-dir", o.out_dir, "directory for the CSV files");
  fig_cmd->callback([&o, fig_rounds] {
    if (o.full && fig_rounds->count() == 0) o.rounds = 20000;
    run_figures(o);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace crahn
