#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crahnflood/sim.hpp"

namespace crahn {

struct SweepAxis {
  long from = 5, to = 65, step = 5;  // requires from < to, step > 0
  std::vector<long> points() const;
};

struct SweepPoint {
  long timer;
  double p_ode, p_sim, p_se;
  double q_ode, q_sim, q_se;
};

// One row per axis point: ODE and simulator P(T) / Q(T). The simulator column
// reuses one common-seed run at the axis maximum (see run_prefixes), which is
// exact and makes the columns nondecreasing by construction.
std::vector<SweepPoint> run_sweep(const SimConfig& cfg, const SweepAxis& axis);

// Emits the sweep CSV: T, P_T_ode, P_T_sim, Q_T_ode, Q_T_sim, scheme. Partial
// results are flushed with a failure marker row if a point throws.
void write_sweep_csv(const SimConfig& cfg, const SweepAxis& axis, const std::string& path);

// dynamics_{static,mobile}.csv: per-frame dynamics (ODE vs simulated mean) for
// static T=65 and mobile T=18; {delivery,buffer}_vs_timer.csv: P(T) and Q(T)
// sweeps for both schemes. Returns the paths written.
std::vector<std::string> write_figures(const SimConfig& base, const std::string& out_dir);

}  // namespace crahn
