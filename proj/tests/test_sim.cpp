#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "crahnflood/sim.hpp"
#include "crahnflood/spectrum.hpp"

using namespace crahn;

namespace {

template <typename F>
Errc thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a crahn::Error");
  return Errc::kBadConfig;
}

SimConfig table1_sim() {
  SimConfig cfg;
  cfg.params = table1();
  return cfg;
}

// Two relays and a far-off destination pinned by hand.
NetworkSnapshot manual_pair(double dx) {
  NetworkSnapshot s;
  s.su = {{0, 0}, {dx, 0}};
  s.state = {kInfected, kSusceptible};
  s.anti = {0, 0};
  s.active = {0, 0};
  s.vel.assign(2, Vec2{});
  s.leg_left.assign(2, 0);
  s.source = 0;
  s.destination = 1;
  return s;
}

}  // namespace

TEST_CASE("network draws respect the geometry") {
  SimConfig cfg = table1_sim();
  ValidatedParams vp = validate(cfg.params);
  Rng rng(42);
  for (int draw = 0; draw < 20; ++draw) {
    NetworkSnapshot s = sample_network(vp, cfg, rng);
    REQUIRE(s.pt.size() == s.pr.size());
    for (size_t k = 0; k < s.pt.size(); ++k) {
      double d = std::hypot(s.pt[k].x - s.pr[k].x, s.pt[k].y - s.pr[k].y);
      CHECK(d == doctest::Approx(15.0).epsilon(1e-12));
    }
    CHECK(s.su.size() >= 400);
    CHECK(s.su.size() <= 900);
    CHECK(s.source != s.destination);
    long infected = 0;
    for (size_t i = 0; i < s.su.size(); ++i) {
      CHECK(s.su[i].x >= 0);
      CHECK(s.su[i].x <= 800);
      if (s.state[i] == kInfected) ++infected;
    }
    CHECK(infected == 1);
    CHECK(s.state[s.source] == kInfected);
  }
}

TEST_CASE("degenerate deployments are rejected") {
  SimConfig cfg = table1_sim();
  cfg.params.lambda_su = 1e-9;
  cfg.max_resamples = 50;
  ValidatedParams vp = validate(cfg.params);
  Rng rng(7);
  CHECK(thrown_code([&] { sample_network(vp, cfg, rng); }) == Errc::kDegenerateDraw);
}

TEST_CASE("slot activation follows the coin and the avoidance disks") {
  SimConfig open = table1_sim();
  open.params.rho = 0;  // no disks: pure coin
  ValidatedParams vp_open = validate(open.params);
  Rng rng(11);
  NetworkSnapshot s = sample_network(vp_open, open, rng);
  long active = 0, total = 0;
  for (int frame = 0; frame < 200; ++frame) {
    slot_activation(s, vp_open, 0.5, rng);
    for (std::uint8_t a : s.active) active += a;
    total += static_cast<long>(s.active.size());
  }
  CHECK(std::abs(static_cast<double>(active) / total - 0.5) < 0.01);

  // Reference-scenario disks: every active node sits outside all of them.
  SimConfig cfg = table1_sim();
  ValidatedParams vp = validate(cfg.params);
  NetworkSnapshot t = sample_network(vp, cfg, rng);
  slot_activation(t, vp, 1.0, rng);
  const double r_avoid = 2.0 * 15.0;
  for (size_t i = 0; i < t.su.size(); ++i) {
    if (!t.active[i]) continue;
    for (const Vec2& pr : t.pr) {
      double d = std::hypot(t.su[i].x - pr.x, t.su[i].y - pr.y);
      CHECK(d >= r_avoid);
    }
  }

  // A disk radius beyond the region diameter silences everyone.
  SimConfig wall = table1_sim();
  wall.params.rho = 1000;
  ValidatedParams vp_wall = validate(wall.params);
  NetworkSnapshot u = sample_network(vp_wall, wall, rng);
  while (u.pt.empty()) u = sample_network(vp_wall, wall, rng);
  slot_activation(u, vp_wall, 1.0, rng);
  for (std::uint8_t a : u.active) CHECK(a == 0);
}

TEST_CASE("noise-limited decode threshold sits at the closed-form distance") {
  ValidatedParams vp = validate(table1());
  // (p_su / (eta_su * noise))^(1/4) = 76.0 m with table-1 numbers
  CHECK(decode_noise_limited(vp, 75.0));
  CHECK(!decode_noise_limited(vp, 77.0));
  CHECK(thrown_code([&] { decode_noise_limited(vp, 0.0); }) == Errc::kArgOutOfDomain);
}

TEST_CASE("per-link success tracks the analytic integrand") {
  ValidatedParams vp = validate(table1());
  for (double d : {20.0, 40.0, 60.0}) {
    double sim = link_success_probe(vp, d, 4000, 314159);
    double model = link_success_model(vp, d);
    CHECK(std::abs(sim - model) < 0.04);
  }
}

TEST_CASE("an isolated pair delivers at the rayleigh fading rate") {
  SystemParams p = table1();
  p.lambda_pt = 0;  // no primary interference
  ValidatedParams vp = validate(p);
  SimConfig cfg = table1_sim();
  cfg.params = p;
  cfg.recovery = Recovery::kNone;
  cfg.timer = 1;

  const double d = 60.0;
  long delivered = 0;
  const long trials = 4000;
  for (long trial = 0; trial < trials; ++trial) {
    NetworkSnapshot s = manual_pair(d);
    Rng rng(999, static_cast<std::uint64_t>(trial));
    step_flooding(s, vp, cfg, 1.0, rng);
    if (s.delivered) {
      ++delivered;
      CHECK(s.t_d == 1);
    }
  }
  double expect = std::exp(-3.0 * 1e-9 * d * d * d * d / 0.1);
  CHECK(std::abs(static_cast<double>(delivered) / trials - expect) < 0.03);
}

TEST_CASE("an antipacket decoded alongside a packet wins the tie") {
  SystemParams p = table1();
  p.lambda_pt = 0;
  p.eta_su = 1e-12;  // every transmission decodes
  ValidatedParams vp = validate(p);
  SimConfig cfg = table1_sim();
  cfg.params = p;
  cfg.recovery = Recovery::kHybrid;
  cfg.timer = 10;

  NetworkSnapshot s;
  s.su = {{0, 0}, {2, 0}, {1, 0}, {700, 700}};
  s.state = {kInfected, kRecovered, kSusceptible, kSusceptible};
  s.anti = {0, 1, 0, 0};
  s.active = {0, 0, 0, 0};
  s.vel.assign(4, Vec2{});
  s.leg_left.assign(4, 0);
  s.source = 0;
  s.destination = 3;

  Rng rng(5);
  step_flooding(s, vp, cfg, 1.0, rng);
  CHECK(s.state[2] == kRecovered);  // packet and antipacket arrived together
  CHECK(s.anti[2] == 1);
  CHECK(s.delivered);  // destination heard the packet too
  CHECK(s.t_d == 1);
  CHECK(s.state[3] == kSusceptible);  // the destination never becomes a relay
}

TEST_CASE("mobility reflects at the walls and respects zero speed") {
  SimConfig cfg = table1_sim();
  cfg.scheme = Scheme::kMobile;
  ValidatedParams vp = validate(cfg.params);
  Rng rng(21);
  NetworkSnapshot s = sample_network(vp, cfg, rng);
  for (int f = 0; f < 50; ++f) {
    step_mobility(s, vp, cfg.mobility, rng);
    for (size_t i = 0; i < s.su.size(); ++i) {
      CHECK(s.su[i].x >= 0);
      CHECK(s.su[i].x <= 800);
      CHECK(s.su[i].y >= 0);
      CHECK(s.su[i].y <= 800);
      double speed = std::hypot(s.vel[i].x, s.vel[i].y);
      CHECK(speed >= 100.0 - 1e-9);
      CHECK(speed <= 200.0 + 1e-9);
    }
  }

  MobilityParams frozen{0.0, 0.0, 1, 10};
  NetworkSnapshot t = sample_network(vp, cfg, rng);
  std::vector<Vec2> before = t.su;
  step_mobility(t, vp, frozen, rng);
  for (size_t i = 0; i < t.su.size(); ++i) {
    CHECK(t.su[i].x == before[i].x);
    CHECK(t.su[i].y == before[i].y);
  }
}

TEST_CASE("no recovery keeps relays infected until the timeout") {
  SimConfig cfg = table1_sim();
  cfg.recovery = Recovery::kNone;
  cfg.timer = 12;
  cfg.rounds = 30;
  cfg.threads = 1;
  RunMetrics m = run(cfg);
  double relays = m.mean_s[0] + m.mean_i[0] + m.mean_r[0];
  for (long f = 0; f <= 12; ++f) {
    CHECK(m.mean_r[f] == 0.0);
    CHECK(m.mean_s[f] + m.mean_i[f] + m.mean_r[f] == doctest::Approx(relays).epsilon(1e-12));
    if (f > 0) CHECK(m.mean_i[f] >= m.mean_i[f - 1]);
  }
}

TEST_CASE("seeded runs are reproducible and prefix-exact") {
  SimConfig cfg = table1_sim();
  cfg.timer = 10;
  cfg.rounds = 40;
  cfg.threads = 1;
  cfg.seed = 20260817;

  RunMetrics a = run(cfg);
  RunMetrics b = run(cfg);
  CHECK(a.mean_i == b.mean_i);
  CHECK(a.p_t == b.p_t);
  CHECK(a.q_t == b.q_t);

  std::vector<RunMetrics> pre = run_prefixes(cfg, {4, 7, 10});
  for (size_t k = 0; k < 3; ++k) {
    SimConfig direct = cfg;
    direct.timer = pre[k].timer;
    RunMetrics d = run(direct);
    CHECK(d.mean_i == pre[k].mean_i);
    CHECK(d.mean_s == pre[k].mean_s);
    CHECK(d.se_i == pre[k].se_i);
    CHECK(d.p_t == pre[k].p_t);
    CHECK(d.q_t == pre[k].q_t);
    CHECK(d.mean_t_d == pre[k].mean_t_d);
    CHECK(d.t_d_counts == pre[k].t_d_counts);
  }
}

TEST_CASE("thread count never changes the results") {
  SimConfig cfg = table1_sim();
  cfg.timer = 10;
  cfg.rounds = 40;
  cfg.seed = 555;
  cfg.threads = 1;
  RunMetrics serial = run(cfg);
  cfg.threads = 4;
  RunMetrics parallel = run(cfg);
  CHECK(serial.mean_i == parallel.mean_i);
  CHECK(serial.mean_s == parallel.mean_s);
  CHECK(serial.mean_r == parallel.mean_r);
  CHECK(serial.se_i == parallel.se_i);
  CHECK(serial.p_t == parallel.p_t);
  CHECK(serial.q_t == parallel.q_t);
  CHECK(serial.mean_t_d == parallel.mean_t_d);
}

TEST_CASE("outage oracles sit on their budgets") {
  ValidatedParams vp = validate(table1());
  double tilde = pr_outage_oracle(vp, OutageModel::kPermissible, 20000, 4242);
  CHECK(std::abs(tilde - 0.05) < 0.01);

  double hat = pr_outage_oracle(vp, OutageModel::kEffective, 5000, 4242);
  CHECK(hat > 0.03);
  CHECK(hat < 0.07);

  CHECK(pr_outage_oracle(vp, OutageModel::kPermissible, 3000, 9) ==
        pr_outage_oracle(vp, OutageModel::kPermissible, 3000, 9));

  // No primaries and a vanishing secondary density: only noise-vs-fading
  // outage remains, 1 - exp(-eta*N*r^4/P) = 5.06e-4.
  SystemParams quiet = table1();
  quiet.lambda_pt = 0;
  quiet.lambda_su = 1e-12;
  double noise_only = pr_outage_oracle(validate(quiet), OutageModel::kPermissible, 50000, 77);
  CHECK(noise_only > 2e-4);
  CHECK(noise_only < 9e-4);
}

TEST_CASE("sim config guards") {
  SimConfig cfg = table1_sim();
  cfg.timer = 0;
  CHECK(thrown_code([&] { run(cfg); }) == Errc::kNonPositive);
  cfg.timer = 5;
  cfg.rounds = 0;
  CHECK(thrown_code([&] { run(cfg); }) == Errc::kNonPositive);
  cfg.rounds = 1;
  cfg.p_hat_override = 1.5;
  CHECK(thrown_code([&] { run(cfg); }) == Errc::kOutOfRange);
  cfg.p_hat_override = -1;
  cfg.scheme = Scheme::kMobile;
  cfg.mobility.v_min = -1;
  CHECK(thrown_code([&] { run(cfg); }) == Errc::kBadConfig);
  cfg.mobility.v_min = 100;
  cfg.mobility.leg_min = 0;
  CHECK(thrown_code([&] { run(cfg); }) == Errc::kBadConfig);

  CHECK(thrown_code([&] { run_prefixes(table1_sim(), {}); }) == Errc::kBadConfig);
  CHECK(thrown_code([&] { run_prefixes(table1_sim(), {5, 0}); }) == Errc::kNonPositive);
}
