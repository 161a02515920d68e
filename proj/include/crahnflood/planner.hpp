#pragma once

#include "crahnflood/epidemic.hpp"
#include "crahnflood/params.hpp"

namespace crahn {

struct PlanResult {
  double t_star;       // smallest timer meeting the delivery target
  double p_su_star;    // transmit power hitting beta_th
  double q_at_t_star;  // buffer occupancy at the planned timer
  double p_at_t_star;  // delivery probability at the planned timer
  double beta_th;
};

// Search horizon for the timer: 50 * (m+1) / (beta * p_hat).
double timer_horizon(const EpidemicConfig& cfg);

// Smallest T with P(T) >= 1 - eps_t, by bisection over the reception
// probability of one long-horizon integration (absolute tolerance 1e-4).
// Throws Infeasible (reporting the achieved supremum) when the target is
// unreachable: with hybrid recovery the vaccinated fraction caps P well below
// one, so planning normally runs on recovery-free dynamics.
double optimal_timer(const EpidemicConfig& cfg, double eps_t);

// Smallest transmit power whose mean neighbor count reaches beta_th:
// (beta_th / k5)^2. alpha == 4 only.
double optimal_power(const ValidatedParams& vp, double beta_th);

// End-to-end: pick the power, re-derive the spectrum at that power, then pick
// the timer on the recovery-free trajectory and report Q and P at it.
PlanResult plan(const ValidatedParams& vp, double eps_t, Scheme scheme, double beta_th);

inline constexpr double kDefaultBetaTh = 4.52;
inline constexpr double kDefaultEpsT = 0.05;

}  // namespace crahn
