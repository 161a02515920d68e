#pragma once

#include "crahnflood/params.hpp"

namespace crahn {

// Densest SU deployment whose aggregate interference keeps the primary
// receivers inside their outage budget.
struct PermissibleDensity {
  double lambda_tilde;  // permissible density, clamped to lambda_su
  double sigma;         // power-free coefficient: lambda_tilde = sigma * p_su^-delta
  double p_tilde;       // activation probability lambda_tilde / lambda_su
  bool clamped;         // the unclamped density exceeded lambda_su
};

struct MeanNeighbors {
  double beta;  // mean decodable neighbors per transmission attempt
  double k5;    // alpha == 4 coefficient (beta = k5 * sqrt(p_su)); NaN otherwise
};

// Everything `derive` produces, in dependency order.
struct SpectrumDerived {
  double lambda_tilde;
  double sigma;
  double p_tilde;
  double avoidance_gain;
  double lambda_hat;  // avoidance-assisted permissible density, clamped to lambda_su
  double p_hat;       // lambda_hat / lambda_su
  double beta;
  double k5;
  double beta_p_hat;  // effective active neighbor rate
  bool clamped;
};

PermissibleDensity permissible_density(const ValidatedParams& vp);

// Density multiplier from silencing SUs inside the rho*r_pt avoidance disks
// (alpha == 4 only).
double avoidance_gain(const ValidatedParams& vp);
double avoidance_gain(const ValidatedParams& vp, double rho);

// Algebraically equivalent rearrangement of avoidance_gain; kept for
// cross-checks, not used by derive().
double avoidance_gain_proof_form(const ValidatedParams& vp);

// Mean decodable neighbor count per transmission attempt. alpha == 4 uses the
// erfcx closed form; other alpha integrates the success probability over the
// plane (adaptive Simpson, relative tolerance 1e-8).
MeanNeighbors mean_neighbors(const ValidatedParams& vp);

// Single-expression closed form for beta * p_hat (alpha == 4), composed
// independently of derive()'s factored path; serves as a cross-check.
double effective_neighbor_rate(const ValidatedParams& vp);

SpectrumDerived derive(const ValidatedParams& vp);

// Per-link success probability at the given distance under Rayleigh fading,
// noise, and PT-field interference: the integrand behind mean_neighbors().
double link_success_model(const ValidatedParams& vp, double distance);

// exp(x^2) * erfc(x) for x >= 0 without overflow (erfcx).
double erfcx_pos(double x);

}  // namespace crahn
