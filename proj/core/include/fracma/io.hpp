#pragma once

#include "fracma/barrier.hpp"
#include "fracma/config.hpp"
#include "fracma/grid_function.hpp"
#include "fracma/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracma {

// Node table of a solution: one row per grid node with the coordinates, u,
// the base datum phi, and the offset u - phi.  When a report is supplied
// the audit columns (residual against the dense family, lambda_min of the
// audit argmin) are filled on audit nodes and left empty elsewhere.
// Numbers print with %.17g so a round-trip is bit-exact.
template <int N>
void write_solution_csv(std::ostream& out, const GridFunction<N>& u,
                        const SolveReport* report = nullptr);
template <int N>
void write_solution_csv(const std::string& path, const GridFunction<N>& u,
                        const SolveReport* report = nullptr);

// The solve diagnostics as pretty-printed JSON: the stage table, measured
// constants, audit summary, and barrier data.  Per-node audit values live
// in the solution CSV, not here.
std::string report_json(const SolveReport& report);
void write_report_json(const std::string& path, const SolveReport& report);

// Radial profile of the barrier potential: log-spaced rho with w1(rho) and
// the decay envelope A0/A1 * min{1, rho^-tau} it was certified against.
template <int N>
void write_barrier_csv(std::ostream& out, const Barrier<N>& barrier,
                       double min_radius, double max_radius, int samples);
template <int N>
void write_barrier_csv(const std::string& path, const Barrier<N>& barrier,
                       double min_radius, double max_radius, int samples);

// Reproducibility stamp for a run: the canonical config text and its hash,
// the sampling seed, UTC wall-clock bounds, and the files the run wrote.
// Rerunning with the same manifest config and seed reproduces every output
// byte for byte.
struct RunManifest {
  SolverConfig config;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& manifest);
void write_manifest_json(const std::string& path, const RunManifest& manifest);

// ISO-8601 UTC at second resolution, e.g. "2024-05-03T17:22:09Z".
std::string utc_timestamp();

}  // namespace fracma
