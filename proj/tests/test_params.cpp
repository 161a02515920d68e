#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "crahnflood/config.hpp"
#include "crahnflood/params.hpp"

using namespace crahn;

namespace {

template <typename F>
Errc thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a crahn::Error");
  return Errc::kBadConfig;
}

}  // namespace

TEST_CASE("table 1 defaults validate and pin the path-loss constants") {
  SystemParams p = table1();
  CHECK(p.lambda_pt == 1e-5);
  CHECK(p.lambda_su == 1e-3);
  CHECK(p.p_pt == 0.3);
  CHECK(p.p_su == 0.1);
  CHECK(p.noise == 1e-9);
  CHECK(p.eta_pr == 3.0);
  CHECK(p.eta_su == 3.0);
  CHECK(p.alpha == 4.0);
  CHECK(p.r_pt == 15.0);
  CHECK(p.eps_pr == 0.05);
  CHECK(p.rho == 2.0);
  CHECK(p.region_side == 800.0);

  ValidatedParams vp = validate(p);
  CHECK(vp.constants().delta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(vp.constants().k_alpha == doctest::Approx(4.934802200544679).epsilon(1e-12));
}

TEST_CASE("validate rejects broken parameters with the right codes") {
  auto broken = [](auto&& tweak) {
    SystemParams p = table1();
    tweak(p);
    return thrown_code([&] { validate(p); });
  };
  CHECK(broken([](SystemParams& p) { p.lambda_su = 0; }) == Errc::kNonPositive);
  CHECK(broken([](SystemParams& p) { p.p_su = -0.1; }) == Errc::kNonPositive);
  CHECK(broken([](SystemParams& p) { p.noise = 0; }) == Errc::kNonPositive);
  CHECK(broken([](SystemParams& p) { p.t_frame = 0; }) == Errc::kNonPositive);
  CHECK(broken([](SystemParams& p) { p.lambda_pt = -1e-9; }) == Errc::kNonPositive);
  CHECK(broken([](SystemParams& p) { p.rho = -1; }) == Errc::kNonPositive);
  CHECK(broken([](SystemParams& p) { p.eps_pr = 1.5; }) == Errc::kOutageOutOfRange);
  CHECK(broken([](SystemParams& p) { p.eps_pr = 0; }) == Errc::kOutageOutOfRange);
  CHECK(broken([](SystemParams& p) { p.eps_su = 1.0; }) == Errc::kOutageOutOfRange);
  CHECK(broken([](SystemParams& p) { p.alpha = 2.0; }) == Errc::kAlphaTooSmall);
  CHECK(thrown_code([] { pathloss_constants(1.5); }) == Errc::kAlphaTooSmall);

  // Boundary cases that must stay legal.
  SystemParams p = table1();
  p.lambda_pt = 0;
  p.rho = 0;
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("unit sanity guard catches watt-scale powers") {
  // Same scenario expressed in watts: the noise-only outage alone then
  // overshoots the primary budget, which is the symptom of mixed units.
  SystemParams p = table1();
  p.p_pt = 0.3e-3;
  p.p_su = 0.1e-3;
  CHECK(thrown_code([&] { validate(p); }) == Errc::kInfeasible);
}

TEST_CASE("config text parses with defaults, comments, and strict keys") {
  SystemParams p = parse_config("lambda_su = 2e-3\n# full-line comment\n\nrho=1.5 # trailing\n",
                                "inline");
  CHECK(p.lambda_su == 2e-3);
  CHECK(p.rho == 1.5);
  CHECK(p.p_pt == 0.3);  // untouched keys keep their defaults
  CHECK(p.alpha == 4.0);

  CHECK(thrown_code([] { parse_config("bandwidth=1\n", "x"); }) == Errc::kBadConfig);
  CHECK(thrown_code([] { parse_config("rho=1\nrho=2\n", "x"); }) == Errc::kBadConfig);
  CHECK(thrown_code([] { parse_config("p_su=fast\n", "x"); }) == Errc::kBadConfig);
  CHECK(thrown_code([] { parse_config("p_su 0.1\n", "x"); }) == Errc::kBadConfig);
  CHECK(thrown_code([] { parse_config("p_su=0.1 watts\n", "x"); }) == Errc::kBadConfig);
}

TEST_CASE("canonical form round-trips and drives the hash") {
  SystemParams p = table1();
  p.eps_su = 0.07;
  p.lambda_pt = 3.25e-6;
  SystemParams q = parse_config(canonical_config(p), "roundtrip");
  CHECK(q.lambda_pt == p.lambda_pt);
  CHECK(q.eps_su == p.eps_su);
  CHECK(canonical_config(q) == canonical_config(p));
  CHECK(config_hash(q) == config_hash(p));

  SystemParams r = p;
  r.p_su = 0.2;
  CHECK(config_hash(r) != config_hash(p));
}

TEST_CASE("missing config files are io errors") {
  CHECK(thrown_code([] { load_config("/nonexistent/nowhere.cfg"); }) == Errc::kIo);
}
