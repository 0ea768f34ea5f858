#include "bpg/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bpg/common.hpp"

namespace bpg {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = strip(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

long to_long(const std::string& v, const std::string& key, long line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ParseError("config line " + std::to_string(line) + ": bad number for " + key, line);
  const long l = static_cast<long>(d);
  if (static_cast<double>(l) != d)
    throw ParseError("config line " + std::to_string(line) + ": " + key +
                         " must be an integer",
                     line);
  return l;
}

double to_double(const std::string& v, const std::string& key, long line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ParseError("config line " + std::to_string(line) + ": bad number for " + key, line);
  return d;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  std::set<std::string> seen;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value",
                       lineno);
    const std::string key = strip(t.substr(0, eq));
    const std::string val = strip(t.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": empty key", lineno);
    if (!seen.insert(key).second)
      throw ParseError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                           "'",
                       lineno);

    if (key == "problem.kind") cfg.problem_kind = val;
    else if (key == "problem.n") cfg.problem_n = static_cast<int>(to_long(val, key, lineno));
    else if (key == "problem.h") cfg.problem_h = static_cast<int>(to_long(val, key, lineno));
    else if (key == "problem.nx") cfg.problem_nx = static_cast<int>(to_long(val, key, lineno));
    else if (key == "problem.ny") cfg.problem_ny = static_cast<int>(to_long(val, key, lineno));
    else if (key == "problem.hx") cfg.problem_hx = to_double(val, key, lineno);
    else if (key == "problem.hy") cfg.problem_hy = to_double(val, key, lineno);
    else if (key == "problem.m_file") cfg.problem_m_file = val;
    else if (key == "problem.a_file") cfg.problem_a_file = val;
    else if (key == "precond.kind") cfg.precond_kind = val;
    else if (key == "precond.droptol") cfg.precond_droptol = to_double(val, key, lineno);
    else if (key == "precond.eta") cfg.precond_eta = to_double(val, key, lineno);
    else if (key == "precond.density") cfg.precond_density = to_double(val, key, lineno);
    else if (key == "precond.seed")
      cfg.precond_seed = static_cast<std::uint64_t>(to_long(val, key, lineno));
    else if (key == "precond.file") cfg.precond_file = val;
    else if (key == "s") cfg.s = static_cast<int>(to_long(val, key, lineno));
    else if (key == "j") cfg.j = static_cast<int>(to_long(val, key, lineno));
    else if (key == "track_i") {
      for (const auto& tok : split_list(val))
        cfg.track_i.push_back(static_cast<int>(to_long(tok, key, lineno)));
    } else if (key == "runs") cfg.runs = static_cast<int>(to_long(val, key, lineno));
    else if (key == "seed_base")
      cfg.seed_base = static_cast<std::uint64_t>(to_long(val, key, lineno));
    else if (key == "max_steps") cfg.max_steps = static_cast<int>(to_long(val, key, lineno));
    else if (key == "tol") cfg.tol = to_double(val, key, lineno);
    else if (key == "mode") cfg.mode = val;
    else if (key == "bounds") cfg.bounds = split_list(val);
    else if (key == "outdir") cfg.outdir = val;
    else
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                           "'",
                       lineno);
  }

  if (cfg.problem_kind.empty())
    throw ParseError("config: problem.kind is required", 0);
  if (cfg.runs < 1) throw ParseError("config: runs must be >= 1", 0);
  if (cfg.s < 1) throw ParseError("config: s must be >= 1", 0);
  if (cfg.track_i.empty())
    for (int i = 1; i <= cfg.s; ++i) cfg.track_i.push_back(i);
  for (int i : cfg.track_i)
    if (i < 1 || i > cfg.s)
      throw ParseError("config: tracked index " + std::to_string(i) + " outside 1.." +
                           std::to_string(cfg.s),
                       0);
  if (cfg.j == 0) cfg.j = cfg.s;
  if (cfg.j < cfg.s) throw ParseError("config: j must be >= s", 0);
  if (cfg.mode != "bpg" && cfg.mode != "pinvit")
    throw ParseError("config: mode must be bpg or pinvit", 0);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> e;
  char buf[64];
  auto put_d = [&](const std::string& k, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    e[k] = buf;
  };
  e["problem.kind"] = problem_kind;
  if (problem_n > 0) e["problem.n"] = std::to_string(problem_n);
  if (problem_h > 0) e["problem.h"] = std::to_string(problem_h);
  if (problem_nx > 0) e["problem.nx"] = std::to_string(problem_nx);
  if (problem_ny > 0) e["problem.ny"] = std::to_string(problem_ny);
  if (problem_hx > 0) put_d("problem.hx", problem_hx);
  if (problem_hy > 0) put_d("problem.hy", problem_hy);
  if (!problem_m_file.empty()) e["problem.m_file"] = problem_m_file;
  if (!problem_a_file.empty()) e["problem.a_file"] = problem_a_file;
  e["precond.kind"] = precond_kind;
  if (precond_droptol > 0) put_d("precond.droptol", precond_droptol);
  if (precond_kind == "perturbed-identity") {
    put_d("precond.eta", precond_eta);
    if (precond_density > 0) put_d("precond.density", precond_density);
    e["precond.seed"] = std::to_string(precond_seed);
  }
  if (!precond_file.empty()) e["precond.file"] = precond_file;
  e["s"] = std::to_string(s);
  e["j"] = std::to_string(j);
  {
    std::string t;
    for (size_t k = 0; k < track_i.size(); ++k)
      t += (k ? "," : "") + std::to_string(track_i[k]);
    e["track_i"] = t;
  }
  e["runs"] = std::to_string(runs);
  e["seed_base"] = std::to_string(seed_base);
  e["max_steps"] = std::to_string(max_steps);
  put_d("tol", tol);
  e["mode"] = mode;
  {
    std::string b;
    for (size_t k = 0; k < bounds.size(); ++k) b += (k ? "," : "") + bounds[k];
    if (!b.empty()) e["bounds"] = b;
  }
  if (!outdir.empty()) e["outdir"] = outdir;
  return e;
}

} // namespace bpg
