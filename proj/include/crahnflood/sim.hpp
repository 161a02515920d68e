#pragma once

#include <cstdint>
#include <vector>

#include "crahnflood/epidemic.hpp"
#include "crahnflood/params.hpp"
#include "crahnflood/rng.hpp"

namespace crahn {

struct Vec2 {
  double x = 0, y = 0;
};

// Random-direction mobility: straight legs with uniform heading, speed, and
// integer duration, reflected at the region boundary.
struct MobilityParams {
  double v_min = 100.0;  // [m/frame]
  double v_max = 200.0;
  int leg_min = 1;  // [frames]
  int leg_max = 10;
};

struct SimConfig {
  SystemParams params;
  Scheme scheme = Scheme::kStatic;
  Recovery recovery = Recovery::kHybrid;
  long timer = 65;  // frames
  long rounds = 2000;
  std::uint64_t seed = 12345;
  int threads = 0;  // <= 0: hardware concurrency
  MobilityParams mobility;
  bool anti_contention = true;   // antipacket transmissions join the interference sum
  double p_hat_override = -1.0;  // >= 0 skips the spectrum derivation (tests)
  bool keep_rounds = false;      // retain per-round I curves and delivery times
  int max_resamples = 1000;      // degenerate-draw retry budget per round
};

// Buffer states.
enum : std::int8_t { kSusceptible = 0, kInfected = 1, kRecovered = 2 };

struct NetworkSnapshot {
  std::vector<Vec2> pt;  // primary transmitters
  std::vector<Vec2> pr;  // their receivers, at distance r_pt
  std::vector<Vec2> su;
  std::vector<Vec2> vel;         // per-SU velocity (mobile scheme)
  std::vector<int> leg_left;     // frames remaining on the current leg
  std::vector<std::int8_t> state;
  std::vector<std::uint8_t> anti;    // holds the antipacket
  std::vector<std::uint8_t> active;  // transmitted this frame
  long source = 0, destination = 0;
  bool delivered = false;
  long t_d = -1;  // delivery frame
  long clock = 0;
  long resamples = 0;
};

struct FrameCounts {
  double s = 0, i = 0, r = 0;  // relay tallies (destination excluded)
};

struct RunMetrics {
  std::vector<double> mean_s, mean_i, mean_r, se_i;  // indexed by frame 0..T
  std::vector<long> t_d_counts;                      // delivery-frame histogram
  double p_t = 0, p_se = 0;
  double q_t = 0, q_se = 0;
  double mean_t_d = 0, t_d_se = 0;
  long rounds = 0, delivered = 0;
  std::uint64_t seed = 0;
  long timer = 0;
  // Populated when SimConfig::keep_rounds: per-round infected curves and
  // delivery frames (-1 when undelivered), indexed by round.
  std::vector<std::vector<double>> round_i;
  std::vector<long> round_t_d;
};

// Draws one topology: Poisson PT and SU counts over the square window, each
// PT's PR at distance r_pt with uniform bearing, distinct source/destination.
// Draws with fewer than two SUs are resampled (DegenerateDraw once the retry
// budget is exhausted).
NetworkSnapshot sample_network(const ValidatedParams& vp, const SimConfig& cfg, Rng& rng);

// Slotted-ALOHA coin per SU, masked by the avoidance disks (radius rho*r_pt
// around every PR). Sets snapshot.active.
void slot_activation(NetworkSnapshot& s, const ValidatedParams& vp, double p_hat, Rng& rng);

// Decode attempt at receiver rx against this frame's transmitter set. Every
// transmission (packet and antipacket alike) plus the whole PT field enters
// the interference sum; per-link Rayleigh fading is drawn here. Returns a
// bitmask: 1 = some packet decoded, 2 = some antipacket decoded.
int attempt_reception(const NetworkSnapshot& s, const ValidatedParams& vp, long rx,
                      const std::vector<long>& tx, const std::vector<std::uint8_t>& tx_is_anti,
                      bool anti_contention, Rng& rng);

// Advances legs, moves every SU, reflects at the walls.
void step_mobility(NetworkSnapshot& s, const ValidatedParams& vp, const MobilityParams& mp,
                   Rng& rng);

// One frame: activation, receptions, synchronous state transitions (antipacket
// wins same-frame ties; the destination never relays and starts antipacket
// flooding the frame after delivery), then the global timeout at clock == T.
// Returns relay tallies taken after the transitions and before the timeout
// clearing, which is what the per-frame metrics record.
FrameCounts step_flooding(NetworkSnapshot& s, const ValidatedParams& vp, const SimConfig& cfg,
                          double p_hat, Rng& rng);

RunMetrics run(const SimConfig& cfg);

// One pass at timer = max(timers): per-prefix metrics for every requested
// timer. Dynamics before T do not depend on T (the timeout only acts at T), so
// each entry is bit-identical to a separate run() at that timer with the same
// seed — this is what makes common-random-number timer sweeps exact.
std::vector<RunMetrics> run_prefixes(const SimConfig& cfg, const std::vector<long>& timers);

enum class OutageModel {
  kPermissible,  // all SUs at density lambda_tilde transmit
  kEffective,    // density lambda_hat, thinned by the avoidance disks
};

// Monte Carlo outage probability at a typical PR (its PT at distance r_pt,
// interferers over a disk of radius 2*region_side).
double pr_outage_oracle(const ValidatedParams& vp, OutageModel model, long trials,
                        std::uint64_t seed);

// Empirical per-link success vs distance under fading, noise, and the PT
// field: the Monte Carlo counterpart of link_success_model.
double link_success_probe(const ValidatedParams& vp, double distance, long trials,
                          std::uint64_t seed);

// Fading pinned to its mean: pure SINR threshold check against noise alone.
bool decode_noise_limited(const ValidatedParams& vp, double distance);

}  // namespace crahn
