#include "crahnflood/planner.hpp"

#include <cmath>
#include <sstream>

#include "crahnflood/spectrum.hpp"

namespace crahn {

double timer_horizon(const EpidemicConfig& cfg) {
  double rate = cfg.beta * cfg.p_hat;
  if (!(rate > 0)) fail(Errc::kInfeasible, "timer horizon undefined: beta * p_hat is zero");
  return 50.0 * (static_cast<double>(cfg.m) + 1.0) / rate;
}

double optimal_timer(const EpidemicConfig& cfg, double eps_t) {
  if (!(eps_t > 0) || !(eps_t < 1))
    fail(Errc::kOutOfRange, "optimal_timer: eps_t must lie in (0, 1)");
  double t_max = timer_horizon(cfg);
  EpidemicConfig horizon = cfg;
  horizon.timer = t_max;
  Trajectory tr = integrate(horizon);
  double target = 1.0 - eps_t;
  double sup = tr.back().p;  // P is nondecreasing
  if (sup < target) {
    std::ostringstream os;
    os << "delivery target " << target << " unreachable: P saturates at " << sup
       << " over the " << t_max << "-frame horizon (recovery="
       << recovery_name(cfg.recovery) << ")";
    fail(Errc::kInfeasible, os.str());
  }
  double lo = 0.0, hi = t_max;
  while (hi - lo > 1e-4) {
    double mid = 0.5 * (lo + hi);
    if (reception_probability(tr, mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double optimal_power(const ValidatedParams& vp, double beta_th) {
  if (!(beta_th > 0)) fail(Errc::kNonPositive, "optimal_power: beta_th must be positive");
  MeanNeighbors mn = mean_neighbors(vp);
  if (!(mn.k5 == mn.k5))  // NaN for alpha != 4
    fail(Errc::kAlphaUnsupported, "optimal_power needs the alpha = 4 closed form");
  double ratio = beta_th / mn.k5;
  return ratio * ratio;
}

PlanResult plan(const ValidatedParams& vp, double eps_t, Scheme scheme, double beta_th) {
  PlanResult res;
  res.beta_th = beta_th;
  res.p_su_star = optimal_power(vp, beta_th);

  SystemParams tuned = vp.get();
  tuned.p_su = res.p_su_star;
  ValidatedParams vp2 = validate(tuned);

  // Timer selection runs on recovery-free dynamics: empirical delivery is not
  // affected by recovery (antipackets exist only after delivery), while the
  // hybrid mean-field P saturates below typical targets.
  EpidemicConfig cfg = config_from(vp2, scheme, Recovery::kNone, 1.0);
  res.t_star = optimal_timer(cfg, eps_t);

  cfg.timer = res.t_star;
  Trajectory tr = integrate(cfg);
  res.q_at_t_star = buffer_occupancy(tr, res.t_star);
  res.p_at_t_star = reception_probability(tr, res.t_star);
  return res;
}

}  // namespace crahn
