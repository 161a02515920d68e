#include "crahnflood/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace crahn {

namespace {

struct Field {
  const char* name;
  double SystemParams::* member;
};

constexpr Field kFields[] = {
    {"lambda_pt", &SystemParams::lambda_pt},
    {"lambda_su", &SystemParams::lambda_su},
    {"p_pt", &SystemParams::p_pt},
    {"p_su", &SystemParams::p_su},
    {"noise", &SystemParams::noise},
    {"eta_pr", &SystemParams::eta_pr},
    {"eta_su", &SystemParams::eta_su},
    {"alpha", &SystemParams::alpha},
    {"r_pt", &SystemParams::r_pt},
    {"eps_pr", &SystemParams::eps_pr},
    {"eps_su", &SystemParams::eps_su},
    {"rho", &SystemParams::rho},
    {"t_frame", &SystemParams::t_frame},
    {"region_side", &SystemParams::region_side},
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

SystemParams parse_config(const std::string& text, const std::string& origin) {
  SystemParams p;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(Errc::kBadConfig,
           origin + ":" + std::to_string(lineno) + ": expected key=value, got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    const Field* field = nullptr;
    for (const Field& f : kFields)
      if (key == f.name) field = &f;
    if (!field)
      fail(Errc::kBadConfig, origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      fail(Errc::kBadConfig,
           origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      size_t pos = 0;
      double v = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument(val);
      p.*(field->member) = v;
    } catch (const std::exception&) {
      fail(Errc::kBadConfig, origin + ":" + std::to_string(lineno) + ": bad numeric value '" +
                                 val + "' for key '" + key + "'");
    }
  }
  return p;
}

SystemParams load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::kIo, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), path);
}

std::string canonical_config(const SystemParams& p) {
  std::ostringstream os;
  for (const Field& f : kFields) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", p.*(f.member));
    os << f.name << "=" << buf << "\n";
  }
  return os.str();
}

std::uint64_t config_hash(const SystemParams& p) {
  std::string s = canonical_config(p);
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a 64
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace crahn
