// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include "nhdfem/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace nhdfem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, long line) {
  size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + v + "'", line);
  }
  if (pos != v.size()) throw ParseError("trailing characters in number '" + v + "'", line);
  return d;
}

int parse_int(const std::string& v, long line) {
  size_t pos = 0;
  int i;
  try {
    i = std::stoi(v, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + v + "'", line);
  }
  if (pos != v.size()) throw ParseError("trailing characters in integer '" + v + "'", line);
  return i;
}

std::vector<double> parse_list(const std::string& v, long line) {
  std::vector<double> out;
  std::istringstream iss(v);
  std::string tok;
  while (iss >> tok) out.push_back(parse_double(tok, line));
  return out;
}

std::string fmt(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

std::string fmt(const std::vector<double>& list) {
  std::string s;
  for (size_t i = 0; i < list.size(); ++i) {
    if (i) s += " ";
    s += fmt(list[i]);
  }
  return s;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;

  using Setter = std::function<void(const std::string&, long)>;
  std::map<std::string, Setter> keys;
  auto d = [](double& target) {
    return [&target](const std::string& v, long line) { target = parse_double(v, line); };
  };
  auto i = [](int& target) {
    return [&target](const std::string& v, long line) { target = parse_int(v, line); };
  };
  auto s = [](std::string& target) {
    return [&target](const std::string& v, long) { target = v; };
  };
  auto list = [](std::vector<double>& target) {
    return [&target](const std::string& v, long line) { target = parse_list(v, line); };
  };

  keys["/problem"] = s(cfg.problem);
  keys["/order"] = i(cfg.order);
  keys["/levels"] = i(cfg.levels);

  keys["mesh/source"] = s(cfg.mesh.source);
  keys["mesh/n"] = i(cfg.mesh.n);
  keys["mesh/path"] = s(cfg.mesh.path);
  keys["mesh/metal_marker"] = i(cfg.mesh.metal_marker);
  keys["mesh/boundary_marker"] = i(cfg.mesh.boundary_marker);
  keys["mesh/surface_marker"] = i(cfg.mesh.surface_marker);
  keys["mesh/diameter"] = d(cfg.mesh.diameter);
  keys["mesh/ball_n"] = i(cfg.mesh.ball_n);
  keys["mesh/ball_metal_shell"] = i(cfg.mesh.ball_metal_shell);
  keys["mesh/ball_r_metal"] = d(cfg.mesh.ball_r_metal);
  keys["mesh/ball_r_outer"] = d(cfg.mesh.ball_r_outer);

  keys["physics/omega"] = d(cfg.physics.params.omega);
  keys["physics/omega_p"] = d(cfg.physics.params.omega_p);
  keys["physics/gamma"] = d(cfg.physics.params.gamma);
  keys["physics/beta"] = d(cfg.physics.params.beta);
  keys["physics/eps0"] = d(cfg.physics.params.eps0);
  keys["physics/eps_inf"] = d(cfg.physics.params.eps_inf);
  keys["physics/mu1"] = d(cfg.physics.params.mu1);
  keys["physics/mu2"] = d(cfg.physics.params.mu2);
  keys["physics/eps1"] = d(cfg.physics.params.eps1);
  keys["physics/eps2"] = d(cfg.physics.params.eps2);
  keys["physics/omega_list"] = list(cfg.physics.omega_list);
  keys["physics/omega_min"] = d(cfg.physics.omega_min);
  keys["physics/omega_max"] = d(cfg.physics.omega_max);
  keys["physics/omega_count"] = i(cfg.physics.omega_count);
  keys["physics/k_min"] = d(cfg.physics.k_min);
  keys["physics/k_max"] = d(cfg.physics.k_max);
  keys["physics/k_count"] = i(cfg.physics.k_count);

  keys["solver/method"] = s(cfg.solver.method);
  keys["solver/tol"] = d(cfg.solver.tol);
  keys["solver/restart"] = i(cfg.solver.restart);
  keys["solver/max_iter"] = i(cfg.solver.max_iter);

  keys["output/dir"] = s(cfg.output.dir);
  keys["output/vtk_omegas"] = list(cfg.output.vtk_omegas);

  std::string section;
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    if (comment != std::string::npos) raw.erase(comment);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "mesh" && section != "physics" && section != "solver" &&
          section != "output")
        throw ParseError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(section + "/" + key);
    if (it == keys.end())
      throw ParseError("unknown key '" + key + "' in section [" + section + "]", line_no);
    it->second(value, line_no);
  }

  if (cfg.problem != "manufactured" && cfg.problem != "scattering" &&
      cfg.problem != "dispersion")
    throw ParseError("problem must be manufactured, scattering, or dispersion, got '" +
                     cfg.problem + "'");
  if (cfg.order != 1 && cfg.order != 2) throw ParseError("order must be 1 or 2");
  if (cfg.levels < 1) throw ParseError("levels must be >= 1");
  if (cfg.mesh.source != "box" && cfg.mesh.source != "msh" && cfg.mesh.source != "ball")
    throw ParseError("mesh source must be box, msh, or ball, got '" + cfg.mesh.source + "'");
  if (cfg.solver.method != "direct" && cfg.solver.method != "gmres")
    throw ParseError("solver method must be direct or gmres, got '" + cfg.solver.method + "'");
  if (cfg.physics.omega_count < 1 || cfg.physics.k_count < 1)
    throw ParseError("dispersion grid counts must be >= 1");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "problem = " << c.problem << "\n";
  out << "order = " << c.order << "\n";
  out << "levels = " << c.levels << "\n";
  out << "\n[mesh]\n";
  out << "source = " << c.mesh.source << "\n";
  out << "n = " << c.mesh.n << "\n";
  out << "path = " << c.mesh.path << "\n";
  out << "metal_marker = " << c.mesh.metal_marker << "\n";
  out << "boundary_marker = " << c.mesh.boundary_marker << "\n";
  out << "surface_marker = " << c.mesh.surface_marker << "\n";
  out << "diameter = " << fmt(c.mesh.diameter) << "\n";
  out << "ball_n = " << c.mesh.ball_n << "\n";
  out << "ball_metal_shell = " << c.mesh.ball_metal_shell << "\n";
  out << "ball_r_metal = " << fmt(c.mesh.ball_r_metal) << "\n";
  out << "ball_r_outer = " << fmt(c.mesh.ball_r_outer) << "\n";
  out << "\n[physics]\n";
  out << "omega = " << fmt(c.physics.params.omega) << "\n";
  out << "omega_p = " << fmt(c.physics.params.omega_p) << "\n";
  out << "gamma = " << fmt(c.physics.params.gamma) << "\n";
  out << "beta = " << fmt(c.physics.params.beta) << "\n";
  out << "eps0 = " << fmt(c.physics.params.eps0) << "\n";
  out << "eps_inf = " << fmt(c.physics.params.eps_inf) << "\n";
  out << "mu1 = " << fmt(c.physics.params.mu1) << "\n";
  out << "mu2 = " << fmt(c.physics.params.mu2) << "\n";
  out << "eps1 = " << fmt(c.physics.params.eps1) << "\n";
  out << "eps2 = " << fmt(c.physics.params.eps2) << "\n";
  out << "omega_list = " << fmt(c.physics.omega_list) << "\n";
  out << "omega_min = " << fmt(c.physics.omega_min) << "\n";
  out << "omega_max = " << fmt(c.physics.omega_max) << "\n";
  out << "omega_count = " << c.physics.omega_count << "\n";
  out << "k_min = " << fmt(c.physics.k_min) << "\n";
  out << "k_max = " << fmt(c.physics.k_max) << "\n";
  out << "k_count = " << c.physics.k_count << "\n";
  out << "\n[solver]\n";
  out << "method = " << c.solver.method << "\n";
  out << "tol = " << fmt(c.solver.tol) << "\n";
  out << "restart = " << c.solver.restart << "\n";
  out << "max_iter = " << c.solver.max_iter << "\n";
  out << "\n[output]\n";
  out << "dir = " << c.output.dir << "\n";
  out << "vtk_omegas = " << fmt(c.output.vtk_omegas) << "\n";
  return out.str();
}

}  // namespace nhdfem
