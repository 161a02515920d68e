#include "crahnflood/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace crahn {

namespace {

constexpr double kPi = std::numbers::pi;

// Density bracket before the power rescaling: permissible density of
// unit-power interferers, minus the PT density already spending the budget.
double density_bracket(const SystemParams& p, const PathlossConstants& c) {
  double numer = -std::log1p(-p.eps_pr) - p.eta_pr * p.noise * std::pow(p.r_pt, p.alpha) / p.p_pt;
  return numer / (p.r_pt * p.r_pt * std::pow(p.eta_pr, c.delta) * c.k_alpha) - p.lambda_pt;
}

// Adaptive Simpson with the standard Richardson acceptance test.
template <class F>
double simpson_rec(const F& f, double a, double fa, double b, double fb, double m, double fm,
                   double whole, double eps, int depth, bool& ok) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth <= 0) {
    ok = false;
    return left + right;
  }
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, eps / 2.0, depth - 1, ok) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, eps / 2.0, depth - 1, ok);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol, bool& ok) {
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double scale = std::abs(whole);
  if (scale == 0) scale = std::numeric_limits<double>::min();
  ok = true;
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 60, ok);
}

void require_alpha4(const ValidatedParams& vp, const char* op) {
  if (vp.get().alpha != 4.0)
    fail(Errc::kAlphaUnsupported,
         std::string(op) + " has a closed form only for alpha = 4, got alpha = " +
             std::to_string(vp.get().alpha));
}

}  // namespace

double erfcx_pos(double x) {
  if (x < 0) fail(Errc::kArgOutOfDomain, "erfcx_pos: negative argument");
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // Asymptotic series; six terms give ~1e-15 relative error at x = 25.
  double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -static_cast<double>(2 * k - 1) * inv2x2;
    sum += term;
  }
  return sum / (x * std::sqrt(kPi));
}

PermissibleDensity permissible_density(const ValidatedParams& vp) {
  const SystemParams& p = vp.get();
  const PathlossConstants& c = vp.constants();
  double bracket = density_bracket(p, c);
  if (bracket < 0) {
    std::ostringstream os;
    os << "no SU density can meet eps_pr = " << p.eps_pr
       << " (the PT field and noise already exhaust the outage budget; bracket = " << bracket
       << " per m^2)";
    fail(Errc::kInfeasible, os.str());
  }
  PermissibleDensity out;
  out.sigma = bracket * std::pow(p.p_pt, c.delta);
  double raw = bracket * std::pow(p.p_pt / p.p_su, c.delta);
  out.clamped = raw > p.lambda_su;
  out.lambda_tilde = out.clamped ? p.lambda_su : raw;
  out.p_tilde = out.lambda_tilde / p.lambda_su;
  return out;
}

double avoidance_gain(const ValidatedParams& vp) { return avoidance_gain(vp, vp.get().rho); }

double avoidance_gain(const ValidatedParams& vp, double rho) {
  require_alpha4(vp, "avoidance_gain");
  if (rho < 0 || !std::isfinite(rho))
    fail(Errc::kArgOutOfDomain, "avoidance_gain: rho must be nonnegative");
  const SystemParams& p = vp.get();
  double arg = std::sqrt(p.p_pt / (p.eta_pr * p.p_su)) * rho * rho;
  return (kPi / 2.0) / (kPi / 2.0 - std::atan(arg));
}

double avoidance_gain_proof_form(const ValidatedParams& vp) {
  require_alpha4(vp, "avoidance_gain_proof_form");
  const SystemParams& p = vp.get();
  double arg = std::sqrt(p.p_pt / (p.eta_pr * p.p_su)) * p.rho * p.rho / (p.r_pt * p.r_pt);
  double halfpi2 = kPi * kPi / 2.0;
  return std::exp(p.lambda_pt * kPi * p.rho * p.rho) * halfpi2 / (halfpi2 - std::atan(arg));
}

MeanNeighbors mean_neighbors(const ValidatedParams& vp) {
  const SystemParams& p = vp.get();
  const PathlossConstants& c = vp.constants();
  MeanNeighbors out;
  if (p.alpha == 4.0) {
    // Closed form. The exp and erfc arguments satisfy a = b^2, so the product
    // is erfcx(b) and never overflows.
    double b = p.lambda_pt * kPi * kPi * std::sqrt(p.p_pt) / (4.0 * std::sqrt(p.noise));
    out.k5 = (p.lambda_su * kPi / 2.0) * std::sqrt(kPi / (p.eta_su * p.noise)) * erfcx_pos(b);
    out.beta = out.k5 * std::sqrt(p.p_su);
    return out;
  }
  // General alpha: beta = pi*lambda_su * Int_0^inf exp(-a u^(alpha/2) - C u) du
  // after substituting u = r^2 into the success-probability integral.
  out.k5 = std::numeric_limits<double>::quiet_NaN();
  double a = p.eta_su * p.noise / p.p_su;
  double big_c =
      p.lambda_pt * c.k_alpha * std::pow(p.eta_su, c.delta) * std::pow(p.p_pt / p.p_su, c.delta);
  auto integrand = [&](double u) { return std::exp(-a * std::pow(u, p.alpha / 2.0) - big_c * u); };
  // Truncate where both exponents guarantee a negligible tail.
  double upper = std::pow(45.0 / a, 2.0 / p.alpha);
  if (big_c > 0) upper = std::min(upper, std::max(1.0, 45.0 / big_c));
  bool ok = false;
  double integral = adaptive_simpson(integrand, 0.0, upper, 1e-8, ok);
  if (!ok || !std::isfinite(integral))
    fail(Errc::kQuadratureFailure, "mean_neighbors: adaptive quadrature did not converge");
  out.beta = kPi * p.lambda_su * integral;
  return out;
}

double effective_neighbor_rate(const ValidatedParams& vp) {
  require_alpha4(vp, "effective_neighbor_rate");
  const SystemParams& p = vp.get();
  PermissibleDensity pd = permissible_density(vp);
  MeanNeighbors mn = mean_neighbors(vp);
  double arg = std::sqrt(p.p_pt / (p.eta_pr * p.p_su)) * p.rho * p.rho;
  return pd.sigma * mn.k5 * kPi / (2.0 * p.lambda_su * (kPi / 2.0 - std::atan(arg)));
}

SpectrumDerived derive(const ValidatedParams& vp) {
  require_alpha4(vp, "derive");
  const SystemParams& p = vp.get();
  PermissibleDensity pd = permissible_density(vp);
  SpectrumDerived d;
  d.lambda_tilde = pd.lambda_tilde;
  d.sigma = pd.sigma;
  d.p_tilde = pd.p_tilde;
  d.avoidance_gain = avoidance_gain(vp);
  double raw_hat = pd.lambda_tilde * d.avoidance_gain;
  bool hat_clamped = raw_hat > p.lambda_su;
  d.lambda_hat = hat_clamped ? p.lambda_su : raw_hat;
  d.p_hat = d.lambda_hat / p.lambda_su;
  d.clamped = pd.clamped || hat_clamped;
  MeanNeighbors mn = mean_neighbors(vp);
  d.beta = mn.beta;
  d.k5 = mn.k5;
  d.beta_p_hat = d.beta * d.p_hat;
  return d;
}

double link_success_model(const ValidatedParams& vp, double distance) {
  if (distance <= 0 || !std::isfinite(distance))
    fail(Errc::kArgOutOfDomain, "link_success_model: distance must be positive");
  const SystemParams& p = vp.get();
  const PathlossConstants& c = vp.constants();
  double noise_term = p.eta_su * p.noise * std::pow(distance, p.alpha) / p.p_su;
  double field_term = p.lambda_pt * c.k_alpha * std::pow(p.eta_su, c.delta) *
                      std::pow(p.p_pt / p.p_su, c.delta) * distance * distance;
  return std::exp(-noise_term - field_term);
}

}  // namespace crahn
