#include "fracma/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace fracma {

namespace {

std::string printed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

template <int N>
void write_solution_csv(std::ostream& out, const GridFunction<N>& u,
                        const SolveReport* report) {
  const GridBox<N>& box = u.box();
  for (int d = 0; d < N; ++d) out << "x" << d << ",";
  out << "u,phi,offset,audit_residual,argmin_lambda_min\n";
  // Audit nodes are stored in ascending flat order, so one cursor suffices.
  std::size_t cursor = 0;
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    const Vec<N> x = box.coord(flat);
    const double offset = u.offsets()[flat];
    const double phi = u.base().value(x);
    for (int d = 0; d < N; ++d) out << printed(x[d]) << ",";
    out << printed(phi + offset) << "," << printed(phi) << ","
        << printed(offset) << ",";
    if (report && cursor < report->audit_nodes.size() &&
        report->audit_nodes[cursor] == flat) {
      out << printed(report->node_residuals[cursor]) << ","
          << printed(report->node_argmin_lambda[cursor]);
      ++cursor;
    } else {
      out << ",";
    }
    out << "\n";
  }
}

template <int N>
void write_solution_csv(const std::string& path, const GridFunction<N>& u,
                        const SolveReport* report) {
  auto out = open_for_writing(path);
  write_solution_csv(out, u, report);
}

std::string report_json(const SolveReport& report) {
  nlohmann::ordered_json j;
  j["stages"] = nlohmann::ordered_json::array();
  for (const StageRecord& rec : report.stages) {
    j["stages"].push_back({{"stage", rec.stage},
                           {"epsilon", rec.epsilon},
                           {"family_members", rec.family_members},
                           {"policy_updates", rec.policy_updates},
                           {"sweeps", rec.sweeps},
                           {"residual", rec.residual},
                           {"stage_diff", rec.stage_diff},
                           {"monotonicity_defect", rec.monotonicity_defect}});
  }
  j["final_residual"] = report.final_residual;
  j["verified_residual"] = report.verified_residual;
  j["phi_lipschitz"] = report.phi_lipschitz;
  j["phi_semiconcavity"] = report.phi_semiconcavity;
  j["lipschitz"] = report.lipschitz;
  j["semiconcavity"] = report.semiconcavity;
  j["min_interior_excess"] = report.min_interior_excess;
  j["eta0"] = report.eta0;
  j["theta_max"] = report.theta_max;
  j["barrier_tau"] = report.barrier_tau;
  j["barrier_M"] = report.barrier_M;
  j["audit_radius"] = report.audit_radius;
  j["audit_nodes"] = report.audit_nodes.size();
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const SolveReport& report) {
  open_for_writing(path) << report_json(report);
}

template <int N>
void write_barrier_csv(std::ostream& out, const Barrier<N>& barrier,
                       double min_radius, double max_radius, int samples) {
  if (!(min_radius > 0.0) || !(max_radius > min_radius) || samples < 2) {
    throw std::invalid_argument(
        "barrier csv needs 0 < min_radius < max_radius and >= 2 samples");
  }
  out << "rho,w1,envelope_lower,envelope_upper\n";
  const double step =
      std::log(max_radius / min_radius) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double rho = min_radius * std::exp(i * step);
    Vec<N> x = Vec<N>::Zero();
    x[0] = rho;
    const double envelope = std::min(1.0, std::pow(rho, -barrier.tau));
    out << printed(rho) << "," << printed(barrier.w1->value(x)) << ","
        << printed(barrier.measured_A0 * envelope) << ","
        << printed(barrier.measured_A1 * envelope) << "\n";
  }
}

template <int N>
void write_barrier_csv(const std::string& path, const Barrier<N>& barrier,
                       double min_radius, double max_radius, int samples) {
  auto out = open_for_writing(path);
  write_barrier_csv(out, barrier, min_radius, max_radius, samples);
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["config"] = canonical_text(manifest.config);
  j["config_hash"] = hex64(config_hash(manifest.config));
  j["seed"] = manifest.seed;
  j["started_utc"] = manifest.started_utc;
  j["finished_utc"] = manifest.finished_utc;
  j["outputs"] = manifest.outputs;
  return j.dump(2) + "\n";
}

void write_manifest_json(const std::string& path, const RunManifest& manifest) {
  open_for_writing(path) << manifest_json(manifest);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[24];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template void write_solution_csv<2>(std::ostream&, const GridFunction<2>&,
                                    const SolveReport*);
template void write_solution_csv<3>(std::ostream&, const GridFunction<3>&,
                                    const SolveReport*);
template void write_solution_csv<2>(const std::string&, const GridFunction<2>&,
                                    const SolveReport*);
template void write_solution_csv<3>(const std::string&, const GridFunction<3>&,
                                    const SolveReport*);
template void write_barrier_csv<2>(std::ostream&, const Barrier<2>&, double,
                                   double, int);
template void write_barrier_csv<3>(std::ostream&, const Barrier<3>&, double,
                                   double, int);
template void write_barrier_csv<2>(const std::string&, const Barrier<2>&,
                                   double, double, int);
template void write_barrier_csv<3>(const std::string&, const Barrier<3>&,
                                   double, double, int);

}  // namespace fracma
