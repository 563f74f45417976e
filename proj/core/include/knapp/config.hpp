#pragma once

#include <string>
#include <variant>
#include <vector>

#include "knapp/flat_quotient.hpp"
#include "knapp/linalg.hpp"
#include "knapp/sphere_quotient.hpp"

namespace knapp {

enum class ManifoldKind { sphere, rp_n, lens, quaternion, torus, klein_bottle };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::torus;
  int n = 2;       // sphere / rp_n dimension
  int p = 3;       // lens order
  int q = 1;       // lens twist
  MatN basis;      // torus lattice (defaults to the identity)

  bool flat() const { return kind == ManifoldKind::torus || kind == ManifoldKind::klein_bottle; }
  std::string name() const;
  std::string canonical() const;  // stable serialization for cache keys
};

enum class DeltaRule { log_rule, power_rule, const_rule };

struct ExperimentConfig {
  ManifoldSpec manifold;
  std::vector<int> k_values;  // degrees, or ell values when k_is_ell
  bool k_is_ell = false;
  DeltaRule delta_rule = DeltaRule::log_rule;
  double delta_param = 0.1;  // eps for power, value for const
  bool weakened_floor = false;
  double rho = 0.6;
  std::vector<double> tube_R;
  double quad_tol = 1e-6;
  std::string csv_path = "sweep.csv";
  std::string cache_dir;
  std::vector<std::string> required_certs{"window", "defect"};

  double delta_for(double lambda) const;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

std::variant<SphereQuotient, FlatQuotient> resolve_manifold(const ManifoldSpec& spec);

}  // namespace knapp
