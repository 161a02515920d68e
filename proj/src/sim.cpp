#include "crahnflood/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "crahnflood/spectrum.hpp"

namespace crahn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinDist = 0.1;  // path-loss clamp [m]

// P * d^-alpha with the near-field clamp, from squared distance.
inline double attenuated(double power, double d2, double alpha) {
  d2 = std::max(d2, kMinDist * kMinDist);
  if (alpha == 4.0) return power / (d2 * d2);
  return power * std::pow(d2, -0.5 * alpha);
}

inline double dist2(const Vec2& a, const Vec2& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

void check_sim_config(const SimConfig& cfg) {
  if (cfg.timer < 1) fail(Errc::kNonPositive, "sim: timer must be at least 1 frame");
  if (cfg.rounds < 1) fail(Errc::kNonPositive, "sim: rounds must be at least 1");
  if (cfg.p_hat_override > 1.0)
    fail(Errc::kOutOfRange, "sim: p_hat_override must not exceed 1");
  const MobilityParams& m = cfg.mobility;
  if (cfg.scheme == Scheme::kMobile) {
    if (m.v_min < 0 || m.v_max < m.v_min)
      fail(Errc::kBadConfig, "sim: need 0 <= v_min <= v_max");
    if (m.leg_min < 1 || m.leg_max < m.leg_min)
      fail(Errc::kBadConfig, "sim: need 1 <= leg_min <= leg_max");
  }
}

double activation_probability(const ValidatedParams& vp, const SimConfig& cfg) {
  if (cfg.p_hat_override >= 0) return cfg.p_hat_override;
  return derive(vp).p_hat;
}

// Avoidance-disk membership, cached on the snapshot until positions change.
struct AvoidCache {
  std::vector<std::uint8_t> in;
  bool valid = false;
};

thread_local AvoidCache t_avoid;  // one worker owns one round at a time

void compute_avoidance(const NetworkSnapshot& s, const ValidatedParams& vp,
                       std::vector<std::uint8_t>& in) {
  const SystemParams& p = vp.get();
  const double radius2 = (p.rho * p.r_pt) * (p.rho * p.r_pt);
  const size_t n = s.su.size();
  in.assign(n, 0);
  if (radius2 <= 0) return;
  for (size_t i = 0; i < n; ++i) {
    for (const Vec2& pr : s.pr) {
      if (dist2(s.su[i], pr) < radius2) {
        in[i] = 1;
        break;
      }
    }
  }
}

}  // namespace

NetworkSnapshot sample_network(const ValidatedParams& vp, const SimConfig& cfg, Rng& rng) {
  const SystemParams& p = vp.get();
  const double side = p.region_side;
  const double area = side * side;
  NetworkSnapshot s;

  long n_pt = rng.poisson(p.lambda_pt * area);
  s.pt.resize(n_pt);
  s.pr.resize(n_pt);
  for (long i = 0; i < n_pt; ++i) {
    s.pt[i] = {rng.u01() * side, rng.u01() * side};
    double phi = rng.u01() * kTwoPi;
    s.pr[i] = {s.pt[i].x + p.r_pt * std::cos(phi), s.pt[i].y + p.r_pt * std::sin(phi)};
  }

  long n_su = rng.poisson(p.lambda_su * area);
  while (n_su < 2) {
    if (++s.resamples > cfg.max_resamples)
      fail(Errc::kDegenerateDraw,
           "sample_network: could not draw >= 2 SUs; expected count " +
               std::to_string(p.lambda_su * area));
    n_su = rng.poisson(p.lambda_su * area);
  }
  s.su.resize(n_su);
  for (long i = 0; i < n_su; ++i) s.su[i] = {rng.u01() * side, rng.u01() * side};

  s.source = static_cast<long>(rng.below(n_su));
  do {
    s.destination = static_cast<long>(rng.below(n_su));
  } while (s.destination == s.source);

  s.state.assign(n_su, kSusceptible);
  s.state[s.source] = kInfected;
  s.anti.assign(n_su, 0);
  s.active.assign(n_su, 0);
  s.vel.assign(n_su, Vec2{});
  s.leg_left.assign(n_su, 0);
  t_avoid.valid = false;
  return s;
}

void slot_activation(NetworkSnapshot& s, const ValidatedParams& vp, double p_hat, Rng& rng) {
  if (!t_avoid.valid || t_avoid.in.size() != s.su.size()) {
    compute_avoidance(s, vp, t_avoid.in);
    t_avoid.valid = true;
  }
  const size_t n = s.su.size();
  s.active.resize(n);
  for (size_t i = 0; i < n; ++i) {
    bool coin = rng.u01() < p_hat;  // one draw per SU, unconditionally
    s.active[i] = coin && !t_avoid.in[i];
  }
}

int attempt_reception(const NetworkSnapshot& s, const ValidatedParams& vp, long rx,
                      const std::vector<long>& tx, const std::vector<std::uint8_t>& tx_is_anti,
                      bool anti_contention, Rng& rng) {
  const SystemParams& p = vp.get();
  const Vec2 at = s.su[rx];

  // The whole PT field always interferes.
  double interference = 0.0;
  for (const Vec2& pt : s.pt)
    interference += rng.expo() * attenuated(p.p_pt, dist2(at, pt), p.alpha);

  const size_t m = tx.size();
  static thread_local std::vector<double> w;
  w.resize(m);
  for (size_t j = 0; j < m; ++j) {
    double gain = rng.expo();
    w[j] = gain * attenuated(p.p_su, dist2(at, s.su[tx[j]]), p.alpha);
    if (anti_contention || !tx_is_anti[j]) interference += w[j];
  }

  int got = 0;
  for (size_t j = 0; j < m; ++j) {
    double own = (anti_contention || !tx_is_anti[j]) ? w[j] : 0.0;
    if (w[j] >= p.eta_su * (p.noise + interference - own)) got |= tx_is_anti[j] ? 2 : 1;
  }
  return got;
}

void step_mobility(NetworkSnapshot& s, const ValidatedParams& vp, const MobilityParams& mp,
                   Rng& rng) {
  const double side = vp.get().region_side;
  const size_t n = s.su.size();
  auto fold = [side](double& x, double& v) {
    for (;;) {
      if (x < 0) {
        x = -x;
        v = -v;
      } else if (x > side) {
        x = 2 * side - x;
        v = -v;
      } else {
        break;
      }
    }
  };
  for (size_t i = 0; i < n; ++i) {
    if (s.leg_left[i] <= 0) {
      double angle = rng.u01() * kTwoPi;
      double speed = rng.uniform(mp.v_min, mp.v_max);
      long dur = mp.leg_min +
                 static_cast<long>(rng.below(static_cast<std::uint64_t>(mp.leg_max - mp.leg_min) + 1));
      s.vel[i] = {speed * std::cos(angle), speed * std::sin(angle)};
      s.leg_left[i] = static_cast<int>(dur);
    }
    s.su[i].x += s.vel[i].x;
    s.su[i].y += s.vel[i].y;
    fold(s.su[i].x, s.vel[i].x);
    fold(s.su[i].y, s.vel[i].y);
    --s.leg_left[i];
  }
  t_avoid.valid = false;
}

FrameCounts step_flooding(NetworkSnapshot& s, const ValidatedParams& vp, const SimConfig& cfg,
                          double p_hat, Rng& rng) {
  const bool hybrid = cfg.recovery == Recovery::kHybrid;
  const long n = static_cast<long>(s.su.size());

  slot_activation(s, vp, p_hat, rng);

  std::vector<long> tx;
  std::vector<std::uint8_t> tx_is_anti;
  for (long i = 0; i < n; ++i) {
    if (!s.active[i]) continue;
    if (s.state[i] == kInfected) {
      tx.push_back(i);
      tx_is_anti.push_back(0);
    } else if (hybrid && s.anti[i]) {
      tx.push_back(i);
      tx_is_anti.push_back(1);
    }
  }

  std::vector<std::uint8_t> is_tx(n, 0);
  for (long j : tx) is_tx[j] = 1;

  // Receivers: nodes that could change state and are not transmitting this
  // frame (half duplex). Infected nodes listen only when antipackets exist.
  static thread_local std::vector<int> got;
  got.assign(n, 0);
  if (!tx.empty()) {
    for (long i = 0; i < n; ++i) {
      if (is_tx[i]) continue;
      if (s.state[i] == kSusceptible || (hybrid && s.state[i] == kInfected))
        got[i] = attempt_reception(s, vp, i, tx, tx_is_anti, cfg.anti_contention, rng);
    }
  }

  // Synchronous transitions; an antipacket decoded in the same frame as a
  // packet wins. The destination never becomes a relay.
  for (long i = 0; i < n; ++i) {
    if (i == s.destination) {
      if (!s.delivered && (got[i] & 1)) {
        s.delivered = true;
        s.t_d = s.clock + 1;
        if (hybrid) s.anti[i] = 1;  // starts antipacket flooding next frame
      }
      continue;
    }
    if (s.state[i] == kSusceptible) {
      if (got[i] & 2) {
        s.state[i] = kRecovered;
        s.anti[i] = 1;
      } else if (got[i] & 1) {
        s.state[i] = kInfected;
      }
    } else if (s.state[i] == kInfected) {
      if (got[i] & 2) {
        s.state[i] = kRecovered;
        s.anti[i] = 1;
      }
    }
  }

  ++s.clock;
  FrameCounts counts;
  for (long i = 0; i < n; ++i) {
    if (i == s.destination) continue;
    if (s.state[i] == kSusceptible)
      counts.s += 1;
    else if (s.state[i] == kInfected)
      counts.i += 1;
    else
      counts.r += 1;
  }

  // Global timeout: every buffer is cleared at clock == T. Metrics for frame T
  // are the tallies above, taken before the clearing.
  if (s.clock == cfg.timer) {
    for (long i = 0; i < n; ++i)
      if (s.state[i] == kInfected) s.state[i] = kRecovered;
  }
  return counts;
}

namespace {

struct RoundData {
  std::vector<FrameCounts> counts;  // 0..T
  long t_d = -1;
};

RoundData run_round(const ValidatedParams& vp, const SimConfig& cfg, double p_hat,
                    std::uint64_t round_index) {
  Rng rng(cfg.seed, round_index);
  NetworkSnapshot snap = sample_network(vp, cfg, rng);
  RoundData rd;
  rd.counts.resize(cfg.timer + 1);
  FrameCounts c0;
  for (long i = 0; i < static_cast<long>(snap.su.size()); ++i) {
    if (i == snap.destination) continue;
    if (snap.state[i] == kInfected)
      c0.i += 1;
    else
      c0.s += 1;
  }
  rd.counts[0] = c0;
  for (long f = 1; f <= cfg.timer; ++f) {
    if (cfg.scheme == Scheme::kMobile) step_mobility(snap, vp, cfg.mobility, rng);
    rd.counts[f] = step_flooding(snap, vp, cfg, p_hat, rng);
  }
  rd.t_d = snap.t_d;
  return rd;
}

std::vector<RoundData> run_rounds(const ValidatedParams& vp, const SimConfig& cfg, double p_hat) {
  std::vector<RoundData> data(cfg.rounds);
  int threads = cfg.threads;
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<int>(std::min<long>(threads, cfg.rounds));
  if (threads <= 1) {
    for (long r = 0; r < cfg.rounds; ++r) data[r] = run_round(vp, cfg, p_hat, r);
    return data;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        long r = next.fetch_add(1);
        if (r >= cfg.rounds) return;
        data[r] = run_round(vp, cfg, p_hat, r);
      }
    });
  }
  for (auto& th : pool) th.join();
  return data;
}

// Reduction over rounds in index order; prefix_timer <= the simulated timer
// yields exactly what a run at that shorter timer would have produced.
RunMetrics reduce_rounds(const std::vector<RoundData>& data, const SimConfig& cfg,
                         long prefix_timer) {
  const long T = prefix_timer;
  const long n = static_cast<long>(data.size());
  RunMetrics m;
  m.rounds = n;
  m.seed = cfg.seed;
  m.timer = T;
  m.mean_s.assign(T + 1, 0);
  m.mean_i.assign(T + 1, 0);
  m.mean_r.assign(T + 1, 0);
  m.se_i.assign(T + 1, 0);
  m.t_d_counts.assign(T + 1, 0);

  std::vector<double> sumsq_i(T + 1, 0);
  double sum_q = 0, sumsq_q = 0, sum_td = 0, sumsq_td = 0;
  if (cfg.keep_rounds) {
    m.round_i.reserve(n);
    m.round_t_d.reserve(n);
  }
  for (long r = 0; r < n; ++r) {
    const RoundData& rd = data[r];
    double q = 0;
    for (long f = 0; f <= T; ++f) {
      const FrameCounts& c = rd.counts[f];
      m.mean_s[f] += c.s;
      m.mean_i[f] += c.i;
      m.mean_r[f] += c.r;
      sumsq_i[f] += c.i * c.i;
      if (f >= 1) q += c.i;
    }
    sum_q += q;
    sumsq_q += q * q;
    long td = (rd.t_d >= 1 && rd.t_d <= T) ? rd.t_d : -1;
    if (td >= 0) {
      ++m.delivered;
      ++m.t_d_counts[td];
      sum_td += td;
      sumsq_td += static_cast<double>(td) * td;
    }
    if (cfg.keep_rounds) {
      std::vector<double> curve(T + 1);
      for (long f = 0; f <= T; ++f) curve[f] = rd.counts[f].i;
      m.round_i.push_back(std::move(curve));
      m.round_t_d.push_back(td);
    }
  }
  auto se = [](double sum, double sumsq, long count) {
    if (count < 2) return 0.0;
    double var = (sumsq - sum * sum / count) / (count - 1);
    return std::sqrt(std::max(var, 0.0) / count);
  };
  for (long f = 0; f <= T; ++f) {
    m.se_i[f] = se(m.mean_i[f], sumsq_i[f], n);
    m.mean_s[f] /= n;
    m.mean_i[f] /= n;
    m.mean_r[f] /= n;
  }
  m.q_t = sum_q / n;
  m.q_se = se(sum_q, sumsq_q, n);
  m.p_t = static_cast<double>(m.delivered) / n;
  m.p_se = std::sqrt(std::max(m.p_t * (1.0 - m.p_t), 0.0) / n);
  if (m.delivered > 0) {
    m.mean_t_d = sum_td / m.delivered;
    m.t_d_se = se(sum_td, sumsq_td, m.delivered);
  }
  return m;
}

}  // namespace

RunMetrics run(const SimConfig& cfg) {
  check_sim_config(cfg);
  ValidatedParams vp = validate(cfg.params);
  double p_hat = activation_probability(vp, cfg);
  return reduce_rounds(run_rounds(vp, cfg, p_hat), cfg, cfg.timer);
}

std::vector<RunMetrics> run_prefixes(const SimConfig& cfg, const std::vector<long>& timers) {
  if (timers.empty()) fail(Errc::kBadConfig, "run_prefixes: no timers");
  SimConfig full = cfg;
  full.timer = *std::max_element(timers.begin(), timers.end());
  check_sim_config(full);
  for (long t : timers)
    if (t < 1) fail(Errc::kNonPositive, "run_prefixes: timers must be >= 1");
  ValidatedParams vp = validate(full.params);
  double p_hat = activation_probability(vp, full);
  std::vector<RoundData> data = run_rounds(vp, full, p_hat);
  std::vector<RunMetrics> out;
  out.reserve(timers.size());
  for (long t : timers) out.push_back(reduce_rounds(data, full, t));
  return out;
}

double pr_outage_oracle(const ValidatedParams& vp, OutageModel model, long trials,
                        std::uint64_t seed) {
  if (trials < 1) fail(Errc::kNonPositive, "pr_outage_oracle: trials must be positive");
  const SystemParams& p = vp.get();
  const double radius = 2.0 * p.region_side;
  const double area = std::numbers::pi * radius * radius;
  const double lambda =
      model == OutageModel::kPermissible ? permissible_density(vp).lambda_tilde
                                         : derive(vp).lambda_hat;
  const double avoid2 = (p.rho * p.r_pt) * (p.rho * p.r_pt);
  Rng rng(seed);
  long outages = 0;
  std::vector<Vec2> prs;
  for (long trial = 0; trial < trials; ++trial) {
    // Typical PR at the origin, its PT at distance r_pt (their own link).
    double signal = rng.expo() * attenuated(p.p_pt, p.r_pt * p.r_pt, p.alpha);

    double i_pt = 0.0;
    long n_pt = rng.poisson(p.lambda_pt * area);
    prs.clear();
    prs.push_back({0.0, 0.0});
    for (long k = 0; k < n_pt; ++k) {
      double r = radius * std::sqrt(rng.u01());
      double phi = rng.u01() * kTwoPi;
      Vec2 pos{r * std::cos(phi), r * std::sin(phi)};
      i_pt += rng.expo() * attenuated(p.p_pt, r * r, p.alpha);
      if (model == OutageModel::kEffective) {
        double psi = rng.u01() * kTwoPi;
        prs.push_back({pos.x + p.r_pt * std::cos(psi), pos.y + p.r_pt * std::sin(psi)});
      }
    }

    double i_su = 0.0;
    long n_su = rng.poisson(lambda * area);
    for (long k = 0; k < n_su; ++k) {
      double r = radius * std::sqrt(rng.u01());
      double phi = rng.u01() * kTwoPi;
      Vec2 pos{r * std::cos(phi), r * std::sin(phi)};
      if (model == OutageModel::kEffective && avoid2 > 0) {
        bool silenced = false;
        for (const Vec2& pr : prs) {
          if (dist2(pos, pr) < avoid2) {
            silenced = true;
            break;
          }
        }
        if (silenced) continue;
      }
      i_su += rng.expo() * attenuated(p.p_su, r * r, p.alpha);
    }

    if (signal < p.eta_pr * (p.noise + i_pt + i_su)) ++outages;
  }
  return static_cast<double>(outages) / static_cast<double>(trials);
}

double link_success_probe(const ValidatedParams& vp, double distance, long trials,
                          std::uint64_t seed) {
  if (trials < 1) fail(Errc::kNonPositive, "link_success_probe: trials must be positive");
  if (distance <= 0) fail(Errc::kArgOutOfDomain, "link_success_probe: distance must be positive");
  const SystemParams& p = vp.get();
  const double radius = 2.0 * p.region_side;
  const double area = std::numbers::pi * radius * radius;
  Rng rng(seed);
  long successes = 0;
  for (long trial = 0; trial < trials; ++trial) {
    double w = rng.expo() * attenuated(p.p_su, distance * distance, p.alpha);
    double i_pt = 0.0;
    long n_pt = rng.poisson(p.lambda_pt * area);
    for (long k = 0; k < n_pt; ++k) {
      double r = radius * std::sqrt(rng.u01());
      rng.u01();  // bearing, unused for a distance-only sum
      i_pt += rng.expo() * attenuated(p.p_pt, r * r, p.alpha);
    }
    if (w >= p.eta_su * (p.noise + i_pt)) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(trials);
}

bool decode_noise_limited(const ValidatedParams& vp, double distance) {
  if (distance <= 0) fail(Errc::kArgOutOfDomain, "decode_noise_limited: bad distance");
  const SystemParams& p = vp.get();
  return attenuated(p.p_su, distance * distance, p.alpha) >= p.eta_su * p.noise;
}

}  // namespace crahn
