#pragma once

#include "fracma/quadrature.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fracma {

// Everything a solve needs, grouped the way the config file is: problem
// data, grid geometry, quadrature resolution, matrix-family resolution and
// the continuation / fixed-point controls.
struct SolverConfig {
  // [problem]
  int dimension = 2;                           // n in {2, 3}
  double s = 0.75;                             // order, (1/2, 1)
  std::vector<double> cone_eigenvalues = {1.0, 1.0};  // diagonal of Q
  double bump_amplitude = 0.25;                // eta amplitude
  double bump_decay = 1.0;                     // eta decay rate at infinity

  // [grid]
  double box_radius = 1.0;
  int nodes_per_side = 65;

  // [quadrature]
  QuadratureScheme quad;

  // [family]
  int family_rotations = 8;        // rotation net size per stage
  int family_eigen_per_stage = 2;  // log-eigenvalue steps added per halving
  int verification_factor = 2;     // density multiplier of the audit family

  // [solver]
  int stages = 6;              // K; stage k uses floor epsilon_k = 2^{-k}
  double tol_fp = 1e-3;        // fixed-point residual target (sup norm)
  int max_policy_updates = 8;  // Howard iterations per stage
  int max_sweeps = 2000;       // damped Jacobi sweeps per frozen policy
  double damping = 0.8;        // Jacobi relaxation factor
  double truncation_radius = 0.0;  // B_k radius; 0 = inscribed ball
  double barrier_tau = 0.0;        // 0 = midpoint of (0, min{2s-1, n-2s})
  double audit_fraction = 0.5;     // a-posteriori checks cover |x| <= f * B_k

  double spacing() const {
    return 2.0 * box_radius / (nodes_per_side - 1);
  }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// key = value file with [section] headers, '#'/';' comments, and
// comma-separated lists.  Unknown sections or keys, repeated keys, and
// malformed values are reported as "<source>:<line>: <what>".
SolverConfig parse_config(const std::string& text,
                          const std::string& source_name);
SolverConfig load_config(const std::string& path);

// Normalized round-trippable dump: every key in a fixed order, numbers
// printed with %.17g.  parse_config(canonical_text(c)) == c, and the hash is
// taken over this text so equivalent configs hash equally.
std::string canonical_text(const SolverConfig& config);

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(const std::string& text);
std::uint64_t config_hash(const SolverConfig& config);

}  // namespace fracma
