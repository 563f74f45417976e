#include "knapp/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "knapp/presets.hpp"

namespace knapp {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
  std::vector<int> out;
  for (const std::string& tok : split_ws(value)) {
    auto c1 = tok.find(':');
    if (c1 == std::string::npos) {
      out.push_back(std::stoi(tok));
      continue;
    }
    auto c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos)
      fail(ErrorCode::InvalidArgument, key + ": ranges are start:stop:step");
    int start = std::stoi(tok.substr(0, c1));
    int stop = std::stoi(tok.substr(c1 + 1, c2 - c1 - 1));
    int step = std::stoi(tok.substr(c2 + 1));
    if (step <= 0 || stop < start) fail(ErrorCode::InvalidArgument, key + ": bad range");
    for (int v = start; v <= stop; v += step) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  for (const std::string& tok : split_ws(value)) out.push_back(std::stod(tok));
  return out;
}

MatN parse_basis(const std::string& value) {
  std::vector<std::vector<double>> rows;
  std::string row;
  std::istringstream in(value);
  while (std::getline(in, row, ';')) {
    auto vals = parse_double_list(row);
    if (!vals.empty()) rows.push_back(vals);
  }
  if (rows.empty()) fail(ErrorCode::InvalidArgument, "basis: empty matrix");
  const auto n = rows.size();
  MatN B(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) fail(ErrorCode::InvalidArgument, "basis: matrix must be square");
    for (std::size_t c = 0; c < n; ++c) B(r, c) = rows[r][c];
  }
  return B;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ManifoldSpec::name() const {
  switch (kind) {
    case ManifoldKind::sphere: return "sphere" + std::to_string(n);
    case ManifoldKind::rp_n: return "rp" + std::to_string(n);
    case ManifoldKind::lens: return "lens(" + std::to_string(p) + ";" + std::to_string(q) + ")";
    case ManifoldKind::quaternion: return "quaternion";
    case ManifoldKind::torus: return "torus";
    case ManifoldKind::klein_bottle: return "klein_bottle";
  }
  return "?";
}

std::string ManifoldSpec::canonical() const {
  std::string s = name();
  if (kind == ManifoldKind::torus || kind == ManifoldKind::klein_bottle) {
    s += "|B=";
    for (int r = 0; r < basis.rows(); ++r)
      for (int c = 0; c < basis.cols(); ++c) s += fmt17(basis(r, c)) + ",";
  }
  return s;
}

double ExperimentConfig::delta_for(double lambda) const {
  switch (delta_rule) {
    case DeltaRule::log_rule: return 1.0 / std::log(lambda);
    case DeltaRule::power_rule: return std::pow(lambda, -1.0 + delta_param);
    case DeltaRule::const_rule: return delta_param;
  }
  return 1.0;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.manifold.basis = MatN::Identity(2, 2);
  bool have_k = false, have_ell = false;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::InvalidArgument, "config: unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (section == "manifold") {
      if (key == "preset") {
        if (value == "sphere") cfg.manifold.kind = ManifoldKind::sphere;
        else if (value == "rp_n") cfg.manifold.kind = ManifoldKind::rp_n;
        else if (value == "lens") cfg.manifold.kind = ManifoldKind::lens;
        else if (value == "quaternion") cfg.manifold.kind = ManifoldKind::quaternion;
        else if (value == "torus") cfg.manifold.kind = ManifoldKind::torus;
        else if (value == "klein_bottle") cfg.manifold.kind = ManifoldKind::klein_bottle;
        else fail(ErrorCode::InvalidArgument, "unknown preset " + value);
      } else if (key == "n") cfg.manifold.n = std::stoi(value);
      else if (key == "p") cfg.manifold.p = std::stoi(value);
      else if (key == "q") cfg.manifold.q = std::stoi(value);
      else if (key == "basis") cfg.manifold.basis = parse_basis(value);
      else fail(ErrorCode::InvalidArgument, "unknown manifold key " + key);
    } else if (section == "sweep") {
      if (key == "k") { cfg.k_values = parse_int_list(value, key); have_k = true; }
      else if (key == "ell") { cfg.k_values = parse_int_list(value, key); have_ell = true; }
      else if (key == "delta") {
        auto toks = split_ws(value);
        if (toks.empty()) fail(ErrorCode::InvalidArgument, "delta: missing rule");
        if (toks[0] == "log") cfg.delta_rule = DeltaRule::log_rule;
        else if (toks[0] == "power") {
          cfg.delta_rule = DeltaRule::power_rule;
          if (toks.size() > 1) cfg.delta_param = std::stod(toks[1]);
        } else if (toks[0] == "const") {
          cfg.delta_rule = DeltaRule::const_rule;
          if (toks.size() < 2) fail(ErrorCode::InvalidArgument, "delta: const needs a value");
          cfg.delta_param = std::stod(toks[1]);
        } else fail(ErrorCode::InvalidArgument, "delta: unknown rule " + toks[0]);
      } else if (key == "weakened_floor") cfg.weakened_floor = (value == "true" || value == "1");
      else if (key == "rho") cfg.rho = std::stod(value);
      else if (key == "r" || key == "R") cfg.tube_R = parse_double_list(value);
      else if (key == "tol") cfg.quad_tol = std::stod(value);
      else fail(ErrorCode::InvalidArgument, "unknown sweep key " + key);
    } else if (section == "output") {
      if (key == "csv") cfg.csv_path = value;
      else if (key == "cache") cfg.cache_dir = value;
      else if (key == "require") cfg.required_certs = split_ws(value);
      else fail(ErrorCode::InvalidArgument, "unknown output key " + key);
    } else {
      fail(ErrorCode::InvalidArgument, "key outside a known section: " + key);
    }
  }

  if (have_k && have_ell)
    fail(ErrorCode::InvalidArgument, "config: give either k or ell, not both");
  cfg.k_is_ell = have_ell;
  if (cfg.k_values.empty()) fail(ErrorCode::InvalidArgument, "config: empty k range");
  if (cfg.manifold.flat() && have_ell)
    fail(ErrorCode::InvalidArgument, "config: ell applies to sphere quotients only");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::variant<SphereQuotient, FlatQuotient> resolve_manifold(const ManifoldSpec& spec) {
  switch (spec.kind) {
    case ManifoldKind::sphere: return preset_sphere(spec.n);
    case ManifoldKind::rp_n: return preset_rp(spec.n);
    case ManifoldKind::lens: return preset_lens(spec.p, spec.q);
    case ManifoldKind::quaternion: return preset_quaternion();
    case ManifoldKind::torus: return preset_torus(spec.basis);
    case ManifoldKind::klein_bottle: return preset_klein_bottle();
  }
  fail(ErrorCode::InvalidArgument, "unresolved manifold");
}

}  // namespace knapp
