#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crahnflood/config.hpp"
#include "crahnflood/epidemic.hpp"
#include "crahnflood/params.hpp"
#include "crahnflood/planner.hpp"
#include "crahnflood/sim.hpp"
#include "crahnflood/spectrum.hpp"
#include "crahnflood/version.hpp"

namespace py = pybind11;
using namespace crahn;

namespace {

py::dict spectrum_dict(const SpectrumDerived& d) {
  py::dict out;
  out["lambda_tilde"] = d.lambda_tilde;
  out["sigma"] = d.sigma;
  out["p_tilde"] = d.p_tilde;
  out["avoidance_gain"] = d.avoidance_gain;
  out["lambda_hat"] = d.lambda_hat;
  out["p_hat"] = d.p_hat;
  out["beta"] = d.beta;
  out["k5"] = d.k5;
  out["beta_p_hat"] = d.beta_p_hat;
  out["clamped"] = d.clamped;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "interference-aware flooding analysis for cognitive radio ad hoc networks";
  m.attr("__version__") = kVersion;

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("lambda_pt", &SystemParams::lambda_pt)
      .def_readwrite("lambda_su", &SystemParams::lambda_su)
      .def_readwrite("p_pt", &SystemParams::p_pt)
      .def_readwrite("p_su", &SystemParams::p_su)
      .def_readwrite("noise", &SystemParams::noise)
      .def_readwrite("eta_pr", &SystemParams::eta_pr)
      .def_readwrite("eta_su", &SystemParams::eta_su)
      .def_readwrite("alpha", &SystemParams::alpha)
      .def_readwrite("r_pt", &SystemParams::r_pt)
      .def_readwrite("eps_pr", &SystemParams::eps_pr)
      .def_readwrite("eps_su", &SystemParams::eps_su)
      .def_readwrite("rho", &SystemParams::rho)
      .def_readwrite("t_frame", &SystemParams::t_frame)
      .def_readwrite("region_side", &SystemParams::region_side)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(" + canonical_config(p) + ")";
      });

  m.def("table1", &table1, "reference scenario parameters");

  m.def(
      "derive",
      [](const SystemParams& p) { return spectrum_dict(derive(validate(p))); },
      py::arg("params"), "full spectrum derivation: densities, activation, neighbor rates");

  m.def(
      "permissible_density",
      [](const SystemParams& p) {
        PermissibleDensity d = permissible_density(validate(p));
        py::dict out;
        out["lambda_tilde"] = d.lambda_tilde;
        out["sigma"] = d.sigma;
        out["p_tilde"] = d.p_tilde;
        out["clamped"] = d.clamped;
        return out;
      },
      py::arg("params"), "densest SU deployment inside the primary outage budget");

  m.def(
      "mean_neighbors",
      [](const SystemParams& p) {
        MeanNeighbors n = mean_neighbors(validate(p));
        py::dict out;
        out["beta"] = n.beta;
        out["k5"] = n.k5;
        return out;
      },
      py::arg("params"), "mean decodable neighbors per transmission attempt");

  m.def(
      "avoidance_gain", [](const SystemParams& p) { return avoidance_gain(validate(p)); },
      py::arg("params"));
  m.def(
      "avoidance_gain",
      [](const SystemParams& p, double rho) { return avoidance_gain(validate(p), rho); },
      py::arg("params"), py::arg("rho"),
      "density multiplier from the avoidance disks of radius rho*r_pt");

  m.def(
      "effective_neighbor_rate",
      [](const SystemParams& p) { return effective_neighbor_rate(validate(p)); },
      py::arg("params"), "closed form for beta * p_hat");

  m.def(
      "link_success_model",
      [](const SystemParams& p, double distance) {
        return link_success_model(validate(p), distance);
      },
      py::arg("params"), py::arg("distance"),
      "per-link success probability vs distance under fading, noise, and the PT field");

  m.def(
      "ode_run",
      [](const SystemParams& p, const std::string& scheme, const std::string& recovery,
         double timer, double step) {
        ValidatedParams vp = validate(p);
        EpidemicConfig cfg = config_from(vp, parse_scheme(scheme), parse_recovery(recovery), timer);
        if (step > 0) cfg.step = step;
        Trajectory tr = integrate(cfg);
        std::vector<double> t, s, i, r, prob;
        t.reserve(tr.states.size());
        for (const EpidemicState& st : tr.states) {
          t.push_back(st.t);
          s.push_back(st.s);
          i.push_back(st.i);
          r.push_back(st.r);
          prob.push_back(st.p);
        }
        py::dict out;
        out["t"] = t;
        out["s"] = s;
        out["i"] = i;
        out["r"] = r;
        out["p"] = prob;
        out["p_t"] = tr.back().p;
        out["q_t"] = buffer_occupancy(tr, tr.timer);
        out["median_delivery"] = tr.median_delivery();
        out["m"] = tr.m;
        return out;
      },
      py::arg("params"), py::arg("scheme"), py::arg("recovery"), py::arg("timer"),
      py::arg("step") = 0.0, "mean-field flooding dynamics over [0, timer]");

  m.def(
      "optimal_timer",
      [](const SystemParams& p, double eps_t, const std::string& scheme,
         const std::string& recovery) {
        ValidatedParams vp = validate(p);
        EpidemicConfig cfg =
            config_from(vp, parse_scheme(scheme), parse_recovery(recovery), 1.0);
        return optimal_timer(cfg, eps_t);
      },
      py::arg("params"), py::arg("eps_t"), py::arg("scheme"), py::arg("recovery") = "none",
      "smallest timer T with P(T) >= 1 - eps_t");

  m.def(
      "optimal_power",
      [](const SystemParams& p, double beta_th) { return optimal_power(validate(p), beta_th); },
      py::arg("params"), py::arg("beta_th") = kDefaultBetaTh,
      "smallest transmit power whose neighbor count reaches beta_th");

  m.def(
      "plan",
      [](const SystemParams& p, double eps_t, const std::string& scheme, double beta_th) {
        PlanResult r = plan(validate(p), eps_t, parse_scheme(scheme), beta_th);
        py::dict out;
        out["t_star"] = r.t_star;
        out["p_su_star"] = r.p_su_star;
        out["q_at_t_star"] = r.q_at_t_star;
        out["p_at_t_star"] = r.p_at_t_star;
        out["beta_th"] = r.beta_th;
        return out;
      },
      py::arg("params"), py::arg("eps_t") = kDefaultEpsT, py::arg("scheme") = "static",
      py::arg("beta_th") = kDefaultBetaTh, "power rule plus timer selection, end to end");

  m.def(
      "run_sim",
      [](const SystemParams& p, const std::string& scheme, const std::string& recovery,
         long timer, long rounds, std::uint64_t seed, int threads, bool anti_contention) {
        SimConfig cfg;
        cfg.params = p;
        cfg.scheme = parse_scheme(scheme);
        cfg.recovery = parse_recovery(recovery);
        cfg.timer = timer;
        cfg.rounds = rounds;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.anti_contention = anti_contention;
        RunMetrics r;
        {
          py::gil_scoped_release release;
          r = run(cfg);
        }
        py::dict out;
        out["mean_s"] = r.mean_s;
        out["mean_i"] = r.mean_i;
        out["mean_r"] = r.mean_r;
        out["se_i"] = r.se_i;
        out["t_d_counts"] = r.t_d_counts;
        out["p_t"] = r.p_t;
        out["p_se"] = r.p_se;
        out["q_t"] = r.q_t;
        out["q_se"] = r.q_se;
        out["mean_t_d"] = r.mean_t_d;
        out["t_d_se"] = r.t_d_se;
        out["rounds"] = r.rounds;
        out["delivered"] = r.delivered;
        out["seed"] = r.seed;
        out["timer"] = r.timer;
        return out;
      },
      py::arg("params"), py::arg("scheme"), py::arg("recovery"), py::arg("timer"),
      py::arg("rounds"), py::arg("seed"), py::arg("threads") = 0,
      py::arg("anti_contention") = true, "Monte Carlo flooding rounds -> summary metrics");

  m.def(
      "pr_outage_oracle",
      [](const SystemParams& p, const std::string& model, long trials, std::uint64_t seed) {
        OutageModel om;
        if (model == "permissible")
          om = OutageModel::kPermissible;
        else if (model == "effective")
          om = OutageModel::kEffective;
        else
          fail(Errc::kBadConfig, "pr_outage_oracle: model must be permissible|effective");
        ValidatedParams vp = validate(p);
        py::gil_scoped_release release;
        return pr_outage_oracle(vp, om, trials, seed);
      },
      py::arg("params"), py::arg("model"), py::arg("trials"), py::arg("seed"),
      "Monte Carlo outage probability at a typical primary receiver");

  m.def(
      "link_success_probe",
      [](const SystemParams& p, double distance, long trials, std::uint64_t seed) {
        ValidatedParams vp = validate(p);
        py::gil_scoped_release release;
        return link_success_probe(vp, distance, trials, seed);
      },
      py::arg("params"), py::arg("distance"), py::arg("trials"), py::arg("seed"),
      "empirical counterpart of link_success_model");

  m.def("canonical_config", &canonical_config, py::arg("params"),
        "sorted full-precision key=value serialization");
  m.def("config_hash", &config_hash, py::arg("params"));
}
