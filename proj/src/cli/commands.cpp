#include "pscal/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "pscal/cli/report.hpp"
#include "pscal/error.hpp"
#include "pscal/geometry/field_io.hpp"

namespace pscal::cli {

namespace {

namespace fs = std::filesystem;
using geometry::BaseManifold;
using geometry::ScalarField;
using nlohmann::json;

struct Setup {
  BaseManifold base;
  ScalarField scal_b;
  ScalarField f;
  std::optional<curvature::SubmersionData> sub;
};

Setup build(const RunConfig& cfg) {
  BaseManifold b = geometry::build_base(cfg.base);
  ScalarField scal_b = geometry::scalar_curvature_field(b);
  ScalarField f = materialize(b, cfg.f, scal_b);
  std::optional<curvature::SubmersionData> sub;
  if (cfg.mode == solver::Mode::general) {
    const auto& s = *cfg.submersion;
    auto data = curvature::SubmersionData::from_tensors(
        materialize(b, s.scal_g, scal_b), materialize(b, s.a_horiz_sq, scal_b), materialize(b, s.a_norm_sq, scal_b),
        materialize(b, s.mean_curvature_pairing, scal_b));
    if (s.delta_A) {
      data.delta_A = materialize(b, *s.delta_A, scal_b);
      data.validate(b);
    }
    sub = std::move(data);
  }
  return {b, std::move(scal_b), std::move(f), std::move(sub)};
}

solver::Problem make_problem(const RunConfig& cfg, const Setup& s) {
  if (cfg.mode == solver::Mode::general) return solver::Problem::general(s.base, cfg.fiber, s.f, *s.sub);
  return solver::Problem::product(s.base, cfg.fiber, s.f, s.scal_b);
}

fs::path output_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  return cfg.output_dir;
}

// Certificate for the problem's own variational condition.
feasibility::Certificate main_certificate(const RunConfig& cfg, const Setup& s) {
  if (cfg.mode == solver::Mode::general)
    return feasibility::check_general(s.base, cfg.fiber, *s.sub, s.f, cfg.epsilon);
  return feasibility::check_product(s.base, cfg.fiber, s.f, cfg.epsilon);
}

json skipped(feasibility::TheoremId id, const std::string& reason) {
  return {{"theorem_id", std::string(feasibility::to_string(id))}, {"reason", reason}};
}

feasibility::CanonicalScanFields scan_fields(const RunConfig& cfg, const Setup& s) {
  ScalarField horiz = cfg.scan.scal_g_horiz ? materialize(s.base, *cfg.scan.scal_g_horiz, s.scal_b) : s.scal_b;
  ScalarField a = cfg.scan.a_norm_sq ? materialize(s.base, *cfg.scan.a_norm_sq, s.scal_b)
                                     : geometry::constant_field(s.base, 0.0);
  return {s.scal_b, std::move(horiz), std::move(a)};
}

// Scalar curvature range of the unwarped total space.
std::pair<double, double> total_scal_range(const RunConfig& cfg, const Setup& s) {
  if (s.sub) return {s.sub->scal_g.min(), s.sub->scal_g.max()};
  const auto fr = cfg.fiber.scal_range.value_or(std::pair{cfg.fiber.c, cfg.fiber.c});
  return {s.scal_b.min() + fr.first, s.scal_b.max() + fr.second};
}

solver::Solution reconstruct(const solver::Problem& prob, const ScalarField& u, const solver::SolverConfig& cfg) {
  return solver::evaluate_solution(prob, u, cfg);
}

verification::VerificationReport verify(const RunConfig& cfg, const Setup& s, const solver::Solution& sol) {
  return verification::verify_prescription(s.base, sol, s.f, cfg.fiber, s.sub, {},
                                           cfg.mode == solver::Mode::product ? std::optional{s.scal_b}
                                                                             : std::nullopt);
}

void write_solution_csv(const fs::path& path, const solver::Problem& prob, const solver::Solution& sol) {
  const auto r = solver::el_residual(prob, sol.u);
  geometry::write_columns_csv(path, {"u", "phi", "el_residual"}, {&sol.u.values(), &sol.phi.values(), &r.values()});
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.out) cfg.output_dir = *o.out;
  if (o.epsilon) {
    if (!(*o.epsilon > 0.0)) throw InputError("--epsilon must be positive");
    cfg.epsilon = *o.epsilon;
  }
  if (o.epsilon0) cfg.solver.epsilon0 = *o.epsilon0;
  if (o.tol) cfg.solver.tol = *o.tol;
  if (o.max_iter) cfg.solver.max_iter = *o.max_iter;
}

CommandResult cmd_feasibility(const RunConfig& cfg, std::ostream& log) {
  const Setup s = build(cfg);
  json certs = json::array();
  json skips = json::array();
  bool any_pass = false;
  auto record = [&](const feasibility::Certificate& c) {
    any_pass = any_pass || c.pass;
    certs.push_back(to_json(c));
    log << fmt::format("{}: alpha = {:.6g}, {}\n", feasibility::to_string(c.theorem), c.alpha,
                       c.pass ? "pass" : "fail");
  };
  auto attempt = [&](feasibility::TheoremId id, auto&& fn) {
    try {
      record(fn());
    } catch (const HypothesisError& e) {
      skips.push_back(skipped(id, e.what()));
      log << fmt::format("{}: skipped ({})\n", feasibility::to_string(id), e.what());
    }
  };

  using feasibility::TheoremId;
  if (cfg.mode == solver::Mode::general) {
    attempt(TheoremId::general, [&] { return main_certificate(cfg, s); });
  } else {
    attempt(TheoremId::product, [&] { return main_certificate(cfg, s); });
    const auto ric = s.base.ricci_lower_bound();
    if (!ric)
      skips.push_back(skipped(TheoremId::ricci, "Ricci lower bound of the base is unknown"));
    else
      attempt(TheoremId::ricci, [&] {
        return feasibility::check_ricci(s.base.dimension(), cfg.fiber, s.base.volume(), s.f.max(), cfg.epsilon,
                                        ric);
      });
  }
  const auto [lo, hi] = total_scal_range(cfg, s);
  attempt(TheoremId::kazdan_warner, [&] { return feasibility::check_kw(s.f.min(), s.f.max(), lo, hi); });
  if (cfg.mode == solver::Mode::product) {
    if (!cfg.fiber.scal_range) {
      skips.push_back(skipped(TheoremId::canonical_variation, "fiber.scal_range not given"));
    } else {
      try {
        record(feasibility::check_canonical(cfg.fiber, s.f, scan_fields(cfg, s), cfg.scan.t_min, cfg.scan.points)
                   .certificate);
      } catch (const DomainError& e) {
        skips.push_back(skipped(TheoremId::canonical_variation, e.what()));
      }
    }
  }

  CommandResult res;
  res.report = {{"command", "feasibility"}, {"base", s.base.description()}, {"any_pass", any_pass},
                {"certificates", certs}, {"skipped", skips}};
  res.exit_code = any_pass ? exit_ok : exit_failed;
  write_json(res.report, output_dir(cfg) / "feasibility.json");
  return res;
}

CommandResult cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const Setup s = build(cfg);
  const auto prob = make_problem(cfg, s);

  json cert_json;
  try {
    const auto cert = main_certificate(cfg, s);
    cert_json = to_json(cert);
    if (!cert.pass) log << "certificate failed; attempting solve anyway\n";
  } catch (const HypothesisError& e) {
    cert_json = {{"skipped", e.what()}};
    log << "certificate not applicable (" << e.what() << "); attempting solve anyway\n";
  }

  const auto sol = solver::minimize(prob, cfg.solver);
  const auto rep = verify(cfg, s, sol);

  json sensitivity;
  {
    auto relaxed = cfg.solver;
    relaxed.epsilon0 = cfg.solver.epsilon0 / 10.0;
    sensitivity["epsilon0"] = relaxed.epsilon0;
    try {
      const auto alt = solver::minimize(prob, relaxed);
      double diff = 0.0;
      for (std::size_t i = 0; i < alt.u.size(); ++i) diff = std::max(diff, std::abs(alt.u[i] - sol.u[i]));
      sensitivity["converged"] = alt.converged;
      sensitivity["J"] = alt.J_value;
      sensitivity["sup_u_difference"] = diff;
      sensitivity["boundary_active"] = alt.boundary_active;
    } catch (const Error& e) {
      sensitivity["error"] = e.what();
    }
  }

  const fs::path dir = output_dir(cfg);
  write_solution_csv(dir / "solution.csv", prob, sol);

  CommandResult res;
  if (!sol.converged)
    res.exit_code = exit_failed;
  else if (sol.boundary_active || sol.integral_active)
    res.exit_code = exit_constrained;
  else
    res.exit_code = rep.pass ? exit_ok : exit_failed;

  res.report = {{"command", "solve"},       {"base", s.base.description()},
                {"exit_code", res.exit_code}, {"solution", to_json(sol)},
                {"verification", to_json(rep)}, {"certificate", cert_json},
                {"sensitivity", sensitivity}, {"config", cfg.echo}};
  write_json(res.report, dir / "summary.json");
  log << fmt::format("solve: {} after {} iterations, J = {:.12g}, curvature residual {:.3e}, {}\n", sol.status,
                     sol.iterations, sol.J_value, rep.sup_residual, rep.pass ? "verified" : "not verified");
  for (const auto& r : rep.reasons) log << "  " << r << '\n';
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg, const fs::path& solution, std::ostream& log) {
  if (!fs::exists(solution)) throw InputError(fmt::format("solution file {} not found", solution.string()));
  const Setup s = build(cfg);
  const auto prob = make_problem(cfg, s);
  const ScalarField u = geometry::read_field_csv(s.base, solution, "u");
  const auto sol = reconstruct(prob, u, cfg.solver);
  const auto rep = verify(cfg, s, sol);

  CommandResult res;
  res.exit_code = rep.pass ? exit_ok : exit_failed;
  res.report = {{"command", "verify"}, {"solution", solution.string()}, {"verification", to_json(rep)},
                {"state", to_json(sol)}};
  write_json(res.report, output_dir(cfg) / "verification.json");
  log << fmt::format("verify: curvature residual {:.3e}, {}\n", rep.sup_residual, rep.pass ? "pass" : "fail");
  for (const auto& r : rep.reasons) log << "  " << r << '\n';
  return res;
}

CommandResult cmd_scan_canonical(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.fiber.scal_range) throw InputError("fiber.scal_range required for scan-canonical");
  const Setup s = build(cfg);
  CommandResult res;
  feasibility::CanonicalResult scan;
  try {
    scan = feasibility::check_canonical(cfg.fiber, s.f, scan_fields(cfg, s), cfg.scan.t_min, cfg.scan.points);
  } catch (const DomainError& e) {
    res.exit_code = exit_failed;
    res.report = {{"command", "scan-canonical"}, {"pass", false}, {"diagnostic", e.what()}};
    log << "scan-canonical: " << e.what() << '\n';
    write_json(res.report, output_dir(cfg) / "canonical.json");
    return res;
  }

  const fs::path dir = output_dir(cfg);
  {
    std::ofstream out(dir / "scan.csv");
    if (!out) throw InputError(fmt::format("cannot write {}", (dir / "scan.csv").string()));
    out << "t,s_t,S_t,ratio\n";
    for (const auto& r : scan.rows)
      out << geometry::format_real(r.t) << ',' << geometry::format_real(r.s_t) << ','
          << geometry::format_real(r.S_t) << ',' << geometry::format_real(r.ratio) << '\n';
  }
  res.exit_code = scan.certificate.pass ? exit_ok : exit_failed;
  res.report = {{"command", "scan-canonical"},
                {"pass", scan.certificate.pass},
                {"certificate", to_json(scan.certificate)},
                {"limit_ratio", scan.limit_ratio},
                {"rows", scan.rows.size()},
                {"t_min", cfg.scan.t_min}};
  write_json(res.report, dir / "canonical.json");
  log << fmt::format("scan-canonical: limit ratio {:.6g}, {}\n", scan.limit_ratio,
                     scan.certificate.pass ? "pass" : "fail");
  return res;
}

CommandResult cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const BaseManifold b = geometry::build_base(cfg.base);
  const ScalarField scal = geometry::scalar_curvature_field(b);
  CommandResult res;
  json j = {{"command", "spectrum"},
            {"base", b.description()},
            {"dimension", b.dimension()},
            {"nodes", b.node_count()},
            {"analytic", b.analytic()},
            {"volume", b.volume()},
            {"lambda1", b.first_eigenvalue()},
            {"scal_min", scal.min()},
            {"scal_max", scal.max()}};
  if (const auto r = b.ricci_lower_bound()) j["ricci_lower_bound"] = *r;
  if (b.analytic() && b.backend() != geometry::Backend::constants_only) {
    const auto ep = geometry::discrete_first_eigenpair(b);
    j["lambda1_discrete"] = ep.value;
  }
  res.report = j;
  write_json(j, output_dir(cfg) / "spectrum.json");
  log << fmt::format("spectrum: lambda1 = {:.12g}, vol = {:.12g}, scal in [{:.6g}, {:.6g}]\n", b.first_eigenvalue(),
                     b.volume(), scal.min(), scal.max());
  return res;
}

int run_command(const std::string& command, const fs::path& config, const Overrides& overrides,
                const std::optional<fs::path>& solution, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg = load_run_config(config);
    apply_overrides(cfg, overrides);
    CommandResult res;
    if (command == "feasibility") {
      res = cmd_feasibility(cfg, err);
    } else if (command == "solve") {
      res = cmd_solve(cfg, err);
    } else if (command == "verify") {
      if (!solution) throw InputError("verify requires --solution");
      res = cmd_verify(cfg, *solution, err);
    } else if (command == "scan-canonical") {
      res = cmd_scan_canonical(cfg, err);
    } else if (command == "spectrum") {
      res = cmd_spectrum(cfg, err);
    } else {
      throw InputError(fmt::format("unknown command '{}'", command));
    }
    out << res.report.dump(2) << '\n';
    return res.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
}

}  // namespace pscal::cli
