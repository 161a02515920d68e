#include "crahnflood/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace crahn {

PathlossConstants pathloss_constants(double alpha) {
  if (alpha <= 2.0)
    fail(Errc::kAlphaTooSmall, "alpha must exceed 2, got " + std::to_string(alpha));
  const double pi = std::numbers::pi;
  return {2.0 / alpha, 2.0 * pi * pi / (alpha * std::sin(2.0 * pi / alpha))};
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v))
    fail(Errc::kNonPositive, std::string(name) + " must be positive, got " + std::to_string(v));
}

void require_outage(double v, const char* name) {
  if (!(v > 0) || !(v < 1))
    fail(Errc::kOutageOutOfRange,
         std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
}

}  // namespace

ValidatedParams validate(const SystemParams& p) {
  if (p.lambda_pt < 0 || !std::isfinite(p.lambda_pt))
    fail(Errc::kNonPositive, "lambda_pt must be nonnegative");
  require_positive(p.lambda_su, "lambda_su");
  require_positive(p.p_pt, "p_pt");
  require_positive(p.p_su, "p_su");
  require_positive(p.noise, "noise");
  require_positive(p.eta_pr, "eta_pr");
  require_positive(p.eta_su, "eta_su");
  require_positive(p.r_pt, "r_pt");
  require_positive(p.t_frame, "t_frame");
  require_positive(p.region_side, "region_side");
  if (p.rho < 0 || !std::isfinite(p.rho)) fail(Errc::kNonPositive, "rho must be nonnegative");
  require_outage(p.eps_pr, "eps_pr");
  require_outage(p.eps_su, "eps_su");
  PathlossConstants c = pathloss_constants(p.alpha);

  // Unit sanity: with every SU silent the PR outage is the noise-only term
  // 1 - exp(-eta_pr * noise * r_pt^alpha / p_pt). If that alone exceeds the
  // budget the scenario is infeasible -- almost always a W-vs-mW mixup.
  double noise_outage = -std::expm1(-p.eta_pr * p.noise * std::pow(p.r_pt, p.alpha) / p.p_pt);
  if (noise_outage >= p.eps_pr) {
    std::ostringstream os;
    os << "noise-only PR outage " << noise_outage << " already exceeds eps_pr " << p.eps_pr
       << "; check that powers and noise are both in mW";
    fail(Errc::kInfeasible, os.str());
  }
  return ValidatedParams(p, c);
}

SystemParams table1() { return SystemParams{}; }

}  // namespace crahn
