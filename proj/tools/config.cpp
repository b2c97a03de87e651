#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pdhs/errors.hpp"

namespace pdhs::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ConfigError("invalid value for '" + key + "': '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  double x = 0.0;
  std::string rest;
  if (!(is >> x) || (is >> rest) || !std::isfinite(x)) bad_value(key, v);
  return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) bad_value(key, v);
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    bad_value(key, v);
  }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(to_double(key, tok));
  if (out.empty()) bad_value(key, v);
  return out;
}

Eigen::MatrixXd to_matrix(const std::string& key, const std::string& v) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(v);
  std::string row;
  while (std::getline(ss, row, ';')) {
    if (trim(row).empty()) continue;
    rows.push_back(to_list(key, row));
  }
  if (rows.empty()) bad_value(key, v);
  Eigen::MatrixXd M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) bad_value(key, v);
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

std::string fmt_matrix(const Eigen::MatrixXd& M) {
  std::string s;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    if (i) s += "; ";
    for (Eigen::Index j = 0; j < M.cols(); ++j) s += (j ? " " : "") + fmt(M(i, j));
  }
  return s;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"grid.h", [](auto& c, auto& k, auto& v) { c.grid.h = to_double(k, v); }},
      {"grid.n_points", [](auto& c, auto& k, auto& v) { c.grid.n_points = to_unsigned(k, v); }},
      {"grid.offset", [](auto& c, auto& k, auto& v) { c.grid.offset = to_double(k, v); }},
      {"grid.half_length", [](auto& c, auto& k, auto& v) { c.grid.half_length = to_double(k, v); }},
      {"system.name",
       [](auto& c, auto& k, auto& v) {
         if (v != "euler" && v != "custom") bad_value(k, v);
         c.system.name = v;
       }},
      {"system.A",
       [](auto& c, auto& k, auto& v) {
         c.system.A = to_matrix(k, v);
         c.system.name = "custom";
       }},
      {"system.B",
       [](auto& c, auto& k, auto& v) {
         c.system.B = to_matrix(k, v);
         c.system.name = "custom";
       }},
      {"system.N2",
       [](auto& c, auto& k, auto& v) { c.system.N2 = static_cast<int>(to_unsigned(k, v)); }},
      {"times.T", [](auto& c, auto& k, auto& v) { c.times.T = to_double(k, v); }},
      {"times.samples", [](auto& c, auto& k, auto& v) { c.times.samples = to_unsigned(k, v); }},
      {"times.spacing",
       [](auto& c, auto& k, auto& v) {
         if (v == "linear") {
           c.times.spacing = Spacing::kLinear;
         } else if (v == "log") {
           c.times.spacing = Spacing::kLog;
         } else {
           bad_value(k, v);
         }
       }},
      {"relaxation.eps", [](auto& c, auto& k, auto& v) { c.relaxation.eps = to_list(k, v); }},
      {"relaxation.kappa", [](auto& c, auto& k, auto& v) { c.relaxation.kappa = to_double(k, v); }},
      {"relaxation.s", [](auto& c, auto& k, auto& v) { c.relaxation.s = to_double(k, v); }},
      {"relaxation.s_prime",
       [](auto& c, auto& k, auto& v) { c.relaxation.s_prime = to_double(k, v); }},
      {"relaxation.h", [](auto& c, auto& k, auto& v) { c.relaxation.h = to_list(k, v); }},
      {"fit.t_lo", [](auto& c, auto& k, auto& v) { c.fit.t_lo = to_double(k, v); }},
      {"fit.t_hi", [](auto& c, auto& k, auto& v) { c.fit.t_hi = to_double(k, v); }},
      {"output.directory", [](auto& c, auto&, auto& v) { c.output.directory = v; }},
      {"output.prefix", [](auto& c, auto&, auto& v) { c.output.prefix = v; }},
      {"selftest.fault",
       [](auto& c, auto& k, auto& v) {
         if (v != "none" && v != "partition") bad_value(k, v);
         c.selftest.fault = v;
       }},
      {"selftest.seed", [](auto& c, auto& k, auto& v) { c.selftest.seed = to_unsigned(k, v); }},
  };
  return m;
}

std::vector<double> powers_of_two(int from, int to) {
  std::vector<double> v;
  for (int e = from; e >= to; --e) v.push_back(std::ldexp(1.0, e));
  return v;
}

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return grid.h == o.grid.h && grid.n_points == o.grid.n_points &&
         grid.offset == o.grid.offset && grid.half_length == o.grid.half_length &&
         system.name == o.system.name && same(system.A, o.system.A) &&
         same(system.B, o.system.B) && system.N2 == o.system.N2 && times.T == o.times.T &&
         times.samples == o.times.samples && times.spacing == o.times.spacing &&
         relaxation.eps == o.relaxation.eps && relaxation.kappa == o.relaxation.kappa &&
         relaxation.s == o.relaxation.s && relaxation.s_prime == o.relaxation.s_prime &&
         relaxation.h == o.relaxation.h && fit.t_lo == o.fit.t_lo && fit.t_hi == o.fit.t_hi &&
         output.directory == o.output.directory && output.prefix == o.output.prefix &&
         selftest.fault == o.selftest.fault && selftest.seed == o.selftest.seed;
}

ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig c;
  if (command == "decay") {
    c.grid.half_length = 512.0;
    c.times.T = 200.0;
    c.times.samples = 301;
    c.times.spacing = Spacing::kLog;
  } else if (command == "relax-sweep") {
    c.relaxation.eps = powers_of_two(-2, -6);
  } else if (command == "relax-table") {
    c.relaxation.eps = {std::ldexp(1.0, -5)};
    c.relaxation.h = powers_of_two(-4, -6);
  } else if (command == "stability") {
    c.times.T = 1.0;
    c.grid.n_points = 256;
  } else if (command == "selftest") {
    c.grid.n_points = 256;
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return c;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  it->second(c, key, value);
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    try {
      apply_setting(base, key, trim(body.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "grid.h = " << fmt(c.grid.h) << "\n"
     << "grid.n_points = " << c.grid.n_points << "\n"
     << "grid.offset = " << fmt(c.grid.offset) << "\n"
     << "grid.half_length = " << fmt(c.grid.half_length) << "\n"
     << "system.name = " << c.system.name << "\n";
  if (c.system.A.size() > 0) os << "system.A = " << fmt_matrix(c.system.A) << "\n";
  if (c.system.B.size() > 0) os << "system.B = " << fmt_matrix(c.system.B) << "\n";
  // system.A and system.B switch the name to custom, so restate it.
  if (c.system.A.size() > 0 || c.system.B.size() > 0) {
    os << "system.name = " << c.system.name << "\n";
  }
  os << "system.N2 = " << c.system.N2 << "\n"
     << "times.T = " << fmt(c.times.T) << "\n"
     << "times.samples = " << c.times.samples << "\n"
     << "times.spacing = " << (c.times.spacing == Spacing::kLog ? "log" : "linear") << "\n";
  if (!c.relaxation.eps.empty()) os << "relaxation.eps = " << fmt_list(c.relaxation.eps) << "\n";
  os << "relaxation.kappa = " << fmt(c.relaxation.kappa) << "\n"
     << "relaxation.s = " << fmt(c.relaxation.s) << "\n"
     << "relaxation.s_prime = " << fmt(c.relaxation.s_prime) << "\n";
  if (!c.relaxation.h.empty()) os << "relaxation.h = " << fmt_list(c.relaxation.h) << "\n";
  os << "fit.t_lo = " << fmt(c.fit.t_lo) << "\n"
     << "fit.t_hi = " << fmt(c.fit.t_hi) << "\n"
     << "output.directory = " << c.output.directory << "\n"
     << "output.prefix = " << c.output.prefix << "\n"
     << "selftest.fault = " << c.selftest.fault << "\n"
     << "selftest.seed = " << c.selftest.seed << "\n";
  return os.str();
}

void validate_config(const ExperimentConfig& c, const std::string& command) {
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  };
  positive("grid.h", c.grid.h);
  positive("grid.half_length", c.grid.half_length);
  positive("times.T", c.times.T);
  positive("relaxation.kappa", c.relaxation.kappa);
  if (c.times.samples < 2) throw ConfigError("times.samples must be at least 2");
  if (c.system.name == "custom" && (c.system.A.size() == 0 || c.system.B.size() == 0)) {
    throw ConfigError("system.A and system.B are required for a custom system");
  }
  for (double e : c.relaxation.eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("relaxation.eps entries must lie in (0, 1)");
  }
  for (double h : c.relaxation.h) positive("relaxation.h", h);
  if (command == "decay" && !(c.fit.t_lo < c.fit.t_hi)) {
    throw ConfigError("fit.t_lo must be below fit.t_hi");
  }
  if (command == "relax-sweep") {
    std::vector<double> e = c.relaxation.eps;
    std::sort(e.begin(), e.end());
    if (std::unique(e.begin(), e.end()) - e.begin() < 4) {
      throw ConfigError("relaxation.eps needs at least 4 distinct values");
    }
  }
  if (command == "relax-table" && (c.relaxation.eps.size() != 1 || c.relaxation.h.empty())) {
    throw ConfigError("relax-table needs one relaxation.eps value and a relaxation.h list");
  }
  if (command == "relax-sweep" || command == "relax-table") {
    if (!(c.relaxation.s > 2.0 && c.relaxation.s < c.relaxation.s_prime)) {
      throw ConfigError("relaxation.s must satisfy 2 < s < s_prime");
    }
  }
}

SystemSpec make_system(const ExperimentConfig& c) {
  if (c.system.name == "euler") return euler_system();
  try {
    return validate_system(c.system.A, c.system.B, c.system.N2);
  } catch (const Error& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
}

Grid make_grid(const ExperimentConfig& c, double h) {
  try {
    if (c.grid.n_points > 0) return Grid(h, c.grid.n_points, c.grid.offset);
    return window_grid(h, c.grid.half_length, c.grid.offset);
  } catch (const Error& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

}  // namespace pdhs::cli
