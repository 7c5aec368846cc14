#include "pscal/cli/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::cli {

namespace {

// JSON has no inf or nan; they are written as strings.
nlohmann::json real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json to_json(const feasibility::Certificate& cert) {
  nlohmann::json j;
  j["theorem_id"] = std::string(feasibility::to_string(cert.theorem));
  j["alpha"] = real(cert.alpha);
  j["epsilon"] = cert.epsilon ? real(*cert.epsilon) : nlohmann::json();
  j["pass"] = cert.pass;
  j["witness"] = cert.witness ? real(*cert.witness) : nlohmann::json();
  nlohmann::json d = nlohmann::json::object();
  for (const auto& [k, v] : cert.details) d[k] = real(v);
  j["details"] = d;
  if (!cert.note.empty()) j["note"] = cert.note;
  return j;
}

nlohmann::json to_json(const verification::VerificationReport& rep) {
  nlohmann::json j;
  j["pass"] = rep.pass;
  j["sup_residual"] = real(rep.sup_residual);
  j["l2_residual"] = real(rep.l2_residual);
  j["phi_form_sup_residual"] = real(rep.phi_form_sup_residual);
  j["identity_deviation"] = real(rep.identity_deviation);
  j["identity_bound"] = real(rep.identity_bound);
  j["gradient_check_max"] = real(rep.gradient_check_max);
  j["el_residual_norm"] = real(rep.el_residual_norm);
  j["floor_nodes"] = rep.floor_nodes;
  nlohmann::json conv = nlohmann::json::array();
  for (const auto& p : rep.convergence_orders)
    conv.push_back({{"h", real(p.h)}, {"error", real(p.error)}, {"order", real(p.order)}});
  j["convergence_orders"] = conv;
  j["reasons"] = rep.reasons;
  return j;
}

nlohmann::json to_json(const solver::Solution& sol) {
  std::size_t active = 0;
  for (bool a : sol.active_floor) active += a ? 1 : 0;
  nlohmann::json j;
  j["status"] = sol.status;
  j["converged"] = sol.converged;
  j["iterations"] = sol.iterations;
  j["J"] = real(sol.J_value);
  j["j_trace_length"] = sol.j_trace.size();
  j["el_residual_norm"] = real(sol.el_residual_norm);
  j["projected_gradient_norm"] = real(sol.projected_gradient_norm);
  j["constraint_integral"] = real(sol.constraint_integral);
  j["floor_active_nodes"] = active;
  j["boundary_active"] = sol.boundary_active;
  j["integral_active"] = sol.integral_active;
  j["u_min"] = real(sol.u.min());
  j["u_max"] = real(sol.u.max());
  return j;
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out << doc.dump(2) << '\n';
}

}  // namespace pscal::cli
