#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "crahnflood/cli.hpp"

namespace {

int run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"crahnflood"};
  argv.insert(argv.end(), args.begin(), args.end());
  return crahn::cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

long comma_count(const std::string& s) {
  long n = 0;
  for (char c : s)
    if (c == ',') ++n;
  return n;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) { std::remove(path.c_str()); }
  ~TempFile() { std::remove(path.c_str()); }
};

void write_config(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST_CASE("derive writes the spectrum table with the standard preamble") {
  TempFile f("tmp_cli_derive.csv");
  CHECK(run_cli({"derive", "--out", f.path.c_str()}) == 0);

  std::vector<std::string> ls = lines_of(slurp(f.path));
  REQUIRE(ls.size() >= 3);
  CHECK(ls[0].rfind("# crahnflood 0.1.0 config=", 0) == 0);
  CHECK(ls[1] == "key,value");

  double lambda_tilde = -1;
  bool saw_clamped = false;
  for (const std::string& l : ls) {
    if (l.rfind("lambda_tilde,", 0) == 0) lambda_tilde = std::stod(l.substr(13));
    if (l.rfind("clamped,", 0) == 0) saw_clamped = true;
  }
  CHECK(lambda_tilde == doctest::Approx(2.841996704468960e-5).epsilon(1e-7));
  CHECK(saw_clamped);
}

TEST_CASE("reruns with one seed are byte-identical") {
  TempFile a("tmp_cli_rerun_a.csv");
  TempFile b("tmp_cli_rerun_b.csv");
  CHECK(run_cli({"derive", "--out", a.path.c_str()}) == 0);
  CHECK(run_cli({"derive", "--out", b.path.c_str()}) == 0);
  CHECK(slurp(a.path) == slurp(b.path));

  TempFile sa("tmp_cli_sim_a.csv");
  TempFile sb("tmp_cli_sim_b.csv");
  TempFile sas("tmp_cli_sim_a.summary.csv");
  TempFile sbs("tmp_cli_sim_b.summary.csv");
  CHECK(run_cli({"sim", "--rounds", "5", "--timer", "5", "--seed", "99", "--out",
                 sa.path.c_str()}) == 0);
  CHECK(run_cli({"sim", "--rounds", "5", "--timer", "5", "--seed", "99", "--out",
                 sb.path.c_str()}) == 0);
  std::string body_a = slurp(sa.path);
  CHECK(body_a == slurp(sb.path));
  CHECK(slurp(sas.path) == slurp(sbs.path));

  std::vector<std::string> ls = lines_of(body_a);
  REQUIRE(ls.size() == 2 + 6);  // preamble + header + frames 0..5
  CHECK(ls[1] == "frame,mean_S,mean_I,mean_R,se_I");
  std::vector<std::string> sls = lines_of(slurp(sas.path));
  REQUIRE(sls.size() == 3);
  CHECK(sls[1] == "P_T,Q_T,mean_T_D,rounds,seed");
  CHECK(comma_count(sls[2]) == 4);
}

TEST_CASE("ode grids keep the mass balance and always land on the horizon") {
  TempFile f("tmp_cli_ode.csv");
  CHECK(run_cli({"ode", "--timer", "10", "--stride", "100", "--out", f.path.c_str()}) == 0);
  std::vector<std::string> ls = lines_of(slurp(f.path));
  REQUIRE(ls.size() >= 4);
  CHECK(ls[1] == "t,S,I,R,P");
  double last_t = -1;
  for (size_t k = 2; k < ls.size(); ++k) {
    double t, s, i, r, p;
    REQUIRE(std::sscanf(ls[k].c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &s, &i, &r, &p) == 5);
    CHECK(s + i + r == doctest::Approx(640.0).epsilon(1e-6));
    CHECK(p >= 0);
    CHECK(p <= 1);
    last_t = t;
  }
  CHECK(last_t == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("exit codes follow the documented contract") {
  CHECK(run_cli({"no-such-command"}) == 2);
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"derive", "--config", "tmp_cli_missing.cfg"}) == 2);

  TempFile tight("tmp_cli_tight.cfg");
  write_config(tight.path, "eps_pr = 1e-4\n");
  CHECK(run_cli({"derive", "--config", tight.path.c_str()}) == 3);

  TempFile odd_alpha("tmp_cli_alpha.cfg");
  write_config(odd_alpha.path, "alpha = 3\n");
  CHECK(run_cli({"derive", "--config", odd_alpha.path.c_str()}) == 3);

  CHECK(run_cli({"sim", "--rounds", "1", "--timer", "1"}) == 2);  // --out is required
  CHECK(run_cli({"sim", "--scheme", "warp", "--out", "tmp_cli_x.csv"}) == 2);
  CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("sweeps emit one row per horizon with monotone delivery") {
  TempFile f("tmp_cli_sweep.csv");
  CHECK(run_cli({"sweep", "--axis", "2:6:2", "--rounds", "8", "--seed", "3", "--out",
                 f.path.c_str()}) == 0);
  std::vector<std::string> ls = lines_of(slurp(f.path));
  REQUIRE(ls.size() == 2 + 3);
  CHECK(ls[1] == "T,P_T_ode,P_T_sim,Q_T_ode,Q_T_sim,scheme");
  double prev_p = -1;
  for (size_t k = 2; k < ls.size(); ++k) {
    double t, p_ode, p_sim, q_ode, q_sim;
    char tag[16] = {0};
    REQUIRE(std::sscanf(ls[k].c_str(), "%lf,%lf,%lf,%lf,%lf,%15s", &t, &p_ode, &p_sim, &q_ode,
                        &q_sim, tag) == 6);
    CHECK(std::string(tag) == "static");
    CHECK(p_sim >= prev_p);
    prev_p = p_sim;
  }
}

TEST_CASE("figure bundles have the advertised shapes") {
  CHECK(run_cli({"figures", "--rounds", "5", "--seed", "17", "--out-dir", "."}) == 0);

  std::vector<std::string> l4 = lines_of(slurp("dynamics_static.csv"));
  CHECK(l4.size() == 3 + 66);  // preamble, header, context comment, frames 0..65
  CHECK(l4[1] == "frame,ode_S,ode_I,ode_R,ode_P,sim_mean_S,sim_mean_I,sim_mean_R,sim_se_I");
  CHECK(l4[2].rfind("# scheme=static", 0) == 0);
  for (size_t k = 3; k < l4.size(); ++k) CHECK(comma_count(l4[k]) == 8);

  std::vector<std::string> l5 = lines_of(slurp("dynamics_mobile.csv"));
  CHECK(l5.size() == 3 + 19);  // frames 0..18
  CHECK(l5[1] == l4[1]);
  CHECK(l5[2].rfind("# scheme=mobile", 0) == 0);

  std::vector<std::string> l6 = lines_of(slurp("delivery_vs_timer.csv"));
  CHECK(l6.size() == 2 + 26);  // 13 static + 13 mobile horizons
  CHECK(l6[1] == "T,P_T_ode,P_T_sim,P_T_se,scheme");
  long statics = 0, mobiles = 0;
  for (size_t k = 2; k < l6.size(); ++k) {
    if (l6[k].find(",static") != std::string::npos) ++statics;
    if (l6[k].find(",mobile") != std::string::npos) ++mobiles;
  }
  CHECK(statics == 13);
  CHECK(mobiles == 13);

  std::vector<std::string> l7 = lines_of(slurp("buffer_vs_timer.csv"));
  CHECK(l7.size() == 2 + 26);
  CHECK(l7[1] == "T,Q_T_ode,Q_T_sim,Q_T_se,scheme");

  for (const char* f : {"dynamics_static.csv", "dynamics_mobile.csv", "delivery_vs_timer.csv",
                        "buffer_vs_timer.csv"}) std::remove(f);
}
