#pragma once

#include <array>
#include <vector>

#include "crahnflood/params.hpp"

namespace crahn {

enum class Scheme { kStatic, kMobile };

enum class Recovery {
  kHybrid,       // antipacket spreading plus the global timeout
  kTimeoutOnly,  // buffers cleared only at the timeout
  kNone,         // no recovery before the timeout
};

// Mean-field model inputs. m is the relay population (destination excluded),
// so the node total including the destination is m + 1.
struct EpidemicConfig {
  long m = 639;
  double beta = 1.0;
  double p_hat = 1.0;  // [0, 1]; 0 freezes the dynamics
  double t_frame = 1.0;
  double timer = 65.0;  // global timeout T
  Scheme scheme = Scheme::kStatic;
  Recovery recovery = Recovery::kHybrid;
  double step = 0.0;  // integration step; 0 selects 0.01 * t_frame
};

struct EpidemicState {
  double t, s, i, r, p;
};

struct Trajectory {
  std::vector<EpidemicState> states;  // uniform grid over [0, T], plus T itself
  long m = 0;
  double timer = 0;
  double effective_step = 0;  // after any drift-triggered halving
  int halvings = 0;
  bool cleared = false;          // the timeout discontinuity applies at t = timer
  double min_pre_clamp = 0;      // most negative component seen before clamping
  double quartile_t[3] = {0, 0, 0};  // P crossing times for 0.25 / 0.5 / 0.75 (NaN if never)

  double median_delivery() const { return quartile_t[1]; }
  const EpidemicState& back() const { return states.back(); }
  // State after the timeout clears all buffers (I and R drop to zero).
  EpidemicState post_timeout() const;
};

long mean_field_population(const ValidatedParams& vp);

// Builds the mean-field config for a scenario: m from the region, beta and
// p_hat from the spectrum derivation.
EpidemicConfig config_from(const ValidatedParams& vp, Scheme scheme, Recovery recovery,
                           double timer);

// psi = mu: probability a frame's transmission attempt survives contention,
// exp(-beta*p_hat*((I+R+P)/M)*t_frame).
double collision_free_rate(double i, double r, double p, const EpidemicConfig& cfg);

// d/dt of (I, R, P).
std::array<double, 3> static_rhs(double i, double r, double p, const EpidemicConfig& cfg);
std::array<double, 3> mobile_rhs(double i, double r, double p, const EpidemicConfig& cfg);

// Classical RK4 on a uniform grid with a graded startup mesh: the sqrt(R+P)
// coupling is non-Lipschitz at the I(0)=1, R=P=0 initial condition, and plain
// fixed-step RK4 loses its order there. Extra knots clustered near t=0
// (cubically graded over the first frame) restore 4th-order convergence while
// keeping the recorded samples on the uniform grid.
Trajectory integrate(const EpidemicConfig& cfg);
Trajectory integrate(const EpidemicConfig& cfg, double i0, double r0, double p0);

// P(t) with linear interpolation on the stored grid; flat extension beyond the
// timeout. t < 0 is an error.
double reception_probability(const Trajectory& tr, double t);

// Q(t_end) = integral of I over [0, t_end], trapezoid on the stored grid.
double buffer_occupancy(const Trajectory& tr, double t_end);

const char* scheme_name(Scheme s);
const char* recovery_name(Recovery r);
Scheme parse_scheme(const std::string& s);
Recovery parse_recovery(const std::string& s);

}  // namespace crahn
