#pragma once

#include "crahnflood/errors.hpp"

namespace crahn {

// Scenario parameters. Units: powers and noise in milliwatts, distances in
// meters, densities per square meter, time in frame lengths. Defaults are the
// built-in reference scenario.
struct SystemParams {
  double lambda_pt = 1e-5;    // primary transmitter density
  double lambda_su = 1e-3;    // secondary user density
  double p_pt = 0.3;          // primary transmit power [mW]
  double p_su = 0.1;          // secondary transmit power [mW]
  double noise = 1e-9;        // thermal noise power [mW]
  double eta_pr = 3.0;        // SINR threshold at primary receivers
  double eta_su = 3.0;        // SINR threshold at secondary receivers
  double alpha = 4.0;         // path-loss exponent
  double r_pt = 15.0;         // PT -> PR link distance [m]
  double eps_pr = 0.05;       // outage budget for primary receivers
  double eps_su = 0.1;        // outage budget for secondary links
  double rho = 2.0;           // avoidance radius in units of r_pt
  double t_frame = 1.0;       // frame duration (the time unit)
  double region_side = 800.0; // simulation window side [m]
};

struct PathlossConstants {
  double delta;    // 2 / alpha
  double k_alpha;  // 2*pi^2 / (alpha * sin(2*pi/alpha))
};

PathlossConstants pathloss_constants(double alpha);

// Parameters that passed validate(). Construction is only possible through
// validate(), so holders can rely on every invariant below.
class ValidatedParams {
 public:
  const SystemParams& get() const { return p_; }
  const PathlossConstants& constants() const { return c_; }

 private:
  friend ValidatedParams validate(const SystemParams&);
  ValidatedParams(const SystemParams& p, const PathlossConstants& c) : p_(p), c_(c) {}
  SystemParams p_;
  PathlossConstants c_;
};

// Checks positivity, outage budgets in (0,1), alpha > 2, and that the power /
// noise scale is sane: a silent secondary network must already satisfy the
// primary outage budget (guards against W-vs-mW unit mistakes).
ValidatedParams validate(const SystemParams& p);

SystemParams table1();

}  // namespace crahn
