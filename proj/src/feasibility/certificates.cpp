#include "pscal/feasibility/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::feasibility {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainError(fmt::format("epsilon must be positive, got {}", epsilon));
}

void require_nonpositive_c(const FiberSpec& fiber) {
  fiber.validate();
  if (fiber.c > 0.0)
    throw HypothesisError(fmt::format("certificate requires scal_F = c ≤ 0, got c = {}", fiber.c));
}

double max_of_difference(const ScalarField& a, const ScalarField& b, double shift) {
  double m = -kInf;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] - b[i] + shift);
  return m;
}

double product_alpha(double lambda1, double epsilon, double b, double max_term, double ck, double c, double vol,
                     double theta) {
  return lambda1 / (2.0 + epsilon) - b * max_term + ck * c * std::pow(vol, 2.0 / theta - 1.0);
}

double ricci_lhs(double n, double k, double epsilon) {
  return n * (8.0 * k / ((2.0 + epsilon) * (k + 1.0)) + (n - 1.0));
}

double kw_slack(double c, double min_f, double max_f, double min_s, double max_s) {
  return std::min(c * max_f - max_s, min_s - c * min_f);
}

struct Interval {
  double lo = 0.0;  // open bounds
  double hi = kInf;
  bool empty = false;
};

// Intersects (0, inf) with {c : c * min_f < min_s} and {c : max_s < c * max_f}.
Interval kw_interval(double min_f, double max_f, double min_s, double max_s) {
  Interval iv;
  if (min_f > 0.0) {
    iv.hi = std::min(iv.hi, min_s / min_f);
  } else if (min_f == 0.0) {
    if (!(0.0 < min_s)) iv.empty = true;
  } else {
    iv.lo = std::max(iv.lo, min_s / min_f);
  }
  if (max_f > 0.0) {
    iv.lo = std::max(iv.lo, max_s / max_f);
  } else if (max_f == 0.0) {
    if (!(max_s < 0.0)) iv.empty = true;
  } else {
    iv.hi = std::min(iv.hi, max_s / max_f);
  }
  if (!(iv.lo < iv.hi)) iv.empty = true;
  return iv;
}

}  // namespace

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::product: return "product";
    case TheoremId::general: return "general";
    case TheoremId::ricci: return "ricci";
    case TheoremId::kazdan_warner: return "kazdan_warner";
    case TheoremId::canonical_variation: return "canonical_variation";
  }
  return "unknown";
}

double reevaluate_alpha(const Certificate& cert) {
  const auto& d = cert.details;
  auto at = [&](const char* key) {
    auto it = d.find(key);
    if (it == d.end()) throw InputError(fmt::format("certificate details lack '{}'", key));
    return it->second;
  };
  switch (cert.theorem) {
    case TheoremId::product:
      return product_alpha(at("lambda1"), at("epsilon"), at("b_k"), at("max_f_minus_scal_b"), at("c_k"), at("c"),
                           at("vol"), at("theta"));
    case TheoremId::general:
      return product_alpha(at("lambda1"), at("epsilon"), at("b_k"), at("max_f_minus_scal_g_plus_c"), at("c_k"),
                           at("c"), at("vol"), at("theta")) +
             at("b_k") * at("min_delta_a");
    case TheoremId::ricci:
      return ricci_lhs(at("n"), at("k"), at("epsilon")) -
             (at("max_f") + at("ck_over_bk") * at("c") * std::pow(at("vol"), 2.0 / at("theta") - 1.0));
    case TheoremId::kazdan_warner:
      return kw_slack(at("c_trial"), at("min_f"), at("max_f"), at("min_scal"), at("max_scal"));
    case TheoremId::canonical_variation:
      return std::min(at("s_t") / at("S_t") - at("min_f") / at("max_f"),
                      kw_slack(at("c_trial"), at("min_f"), at("max_f"), at("s_t"), at("S_t")));
  }
  throw InputError("unknown theorem id");
}

Certificate check_product(const BaseManifold& b, const FiberSpec& fiber, const ScalarField& f, double epsilon) {
  require_epsilon(epsilon);
  require_nonpositive_c(fiber);
  geometry::require_on(b, f, "f");
  const auto dc = curvature::constants(fiber.k);
  const auto scal_b = geometry::scalar_curvature_field(b);
  const double lambda1 = geometry::first_eigenvalue(b);
  const double vol = geometry::volume(b);
  const double max_term = max_of_difference(f, scal_b, 0.0);

  Certificate cert;
  cert.theorem = TheoremId::product;
  cert.epsilon = epsilon;
  cert.details = {{"lambda1", lambda1},
                  {"epsilon", epsilon},
                  {"b_k", dc.b},
                  {"c_k", dc.c_k},
                  {"theta", dc.theta},
                  {"c", fiber.c},
                  {"vol", vol},
                  {"max_f_minus_scal_b", max_term},
                  {"term_spectral", lambda1 / (2.0 + epsilon)},
                  {"term_potential", -dc.b * max_term},
                  {"term_fiber", dc.c_k * fiber.c * std::pow(vol, 2.0 / dc.theta - 1.0)},
                  {"alpha_eps0", product_alpha(lambda1, 0.0, dc.b, max_term, dc.c_k, fiber.c, vol, dc.theta)}};
  cert.alpha = product_alpha(lambda1, epsilon, dc.b, max_term, dc.c_k, fiber.c, vol, dc.theta);
  cert.pass = cert.alpha > 0.0;
  return cert;
}

Certificate check_general(const BaseManifold& b, const FiberSpec& fiber, const SubmersionData& sub,
                          const ScalarField& f, double epsilon) {
  require_epsilon(epsilon);
  require_nonpositive_c(fiber);
  geometry::require_on(b, f, "f");
  sub.validate(b);
  const double max_da = sub.delta_A.max();
  if (max_da > 0.0)
    throw HypothesisError(fmt::format("general certificate requires max delta_A ≤ 0, got {}", max_da));
  for (std::size_t i = 0; i < sub.mean_curvature_pairing.size(); ++i)
    if (sub.mean_curvature_pairing[i] != 0.0)
      throw HypothesisError(
          fmt::format("general certificate requires minimal fibers (H = 0), du(H) = {} at node {}",
                      sub.mean_curvature_pairing[i], i));

  const auto dc = curvature::constants(fiber.k);
  const double lambda1 = geometry::first_eigenvalue(b);
  const double vol = geometry::volume(b);
  const double max_term = max_of_difference(f, sub.scal_g, fiber.c);
  const double min_da = sub.delta_A.min();

  Certificate cert;
  cert.theorem = TheoremId::general;
  cert.epsilon = epsilon;
  cert.details = {{"lambda1", lambda1},
                  {"epsilon", epsilon},
                  {"b_k", dc.b},
                  {"c_k", dc.c_k},
                  {"theta", dc.theta},
                  {"c", fiber.c},
                  {"vol", vol},
                  {"max_f_minus_scal_g_plus_c", max_term},
                  {"min_delta_a", min_da},
                  {"max_delta_a", max_da},
                  {"term_spectral", lambda1 / (2.0 + epsilon)},
                  {"term_potential", -dc.b * max_term},
                  {"term_fiber", dc.c_k * fiber.c * std::pow(vol, 2.0 / dc.theta - 1.0)},
                  {"term_delta_a", dc.b * min_da},
                  {"alpha_eps0", product_alpha(lambda1, 0.0, dc.b, max_term, dc.c_k, fiber.c, vol, dc.theta) +
                                     dc.b * min_da}};
  cert.alpha = product_alpha(lambda1, epsilon, dc.b, max_term, dc.c_k, fiber.c, vol, dc.theta) + dc.b * min_da;
  cert.pass = cert.alpha > 0.0;
  return cert;
}

Certificate check_ricci(int n, const FiberSpec& fiber, double vol_b, double max_f, double epsilon,
                        std::optional<double> known_ricci) {
  require_epsilon(epsilon);
  require_nonpositive_c(fiber);
  if (n < 1) throw DomainError(fmt::format("base dimension must be >= 1, got {}", n));
  if (!(vol_b > 0.0)) throw DomainError("base volume must be positive");
  if (known_ricci && *known_ricci < n - 1.0)
    throw HypothesisError(
        fmt::format("Ricci certificate requires Ric(g_B) ≥ n - 1 = {}, base bound is {}", n - 1, *known_ricci));
  const auto dc = curvature::constants(fiber.k);
  const double ratio = (fiber.k + 1.0) / (fiber.k - 1.0);
  const double vol_term = fiber.c * std::pow(vol_b, 2.0 / dc.theta - 1.0);
  const double lhs = ricci_lhs(n, fiber.k, epsilon);
  const double rhs = max_f + ratio * vol_term;

  Certificate cert;
  cert.theorem = TheoremId::ricci;
  cert.epsilon = epsilon;
  cert.details = {{"n", static_cast<double>(n)},
                  {"k", static_cast<double>(fiber.k)},
                  {"epsilon", epsilon},
                  {"max_f", max_f},
                  {"c", fiber.c},
                  {"vol", vol_b},
                  {"theta", dc.theta},
                  {"ck_over_bk", ratio},
                  {"lhs", lhs},
                  {"rhs", rhs},
                  {"alpha_eps0", ricci_lhs(n, fiber.k, 0.0) - rhs},
                  // Margin obtained by dividing the product inequality (with
                  // lambda1 >= n, scal_B >= n(n-1)) by b_k; the fiber term then
                  // enters with the opposite sign.
                  {"alpha_from_product_bound", lhs - (max_f - ratio * vol_term)}};
  if (known_ricci) cert.details["ricci_lower_bound"] = *known_ricci;
  cert.alpha = lhs - rhs;
  cert.pass = cert.alpha > 0.0;
  return cert;
}

Certificate check_kw(double min_f, double max_f, double min_scal, double max_scal) {
  if (!(min_f <= max_f) || !(min_scal <= max_scal))
    throw DomainError("Kazdan-Warner ranges must satisfy min <= max");
  const Interval iv = kw_interval(min_f, max_f, min_scal, max_scal);

  Certificate cert;
  cert.theorem = TheoremId::kazdan_warner;
  std::vector<double> trials;
  if (!iv.empty) {
    double w;
    if (iv.lo < 1.0 && 1.0 < iv.hi) w = 1.0;
    else if (iv.hi == kInf) w = 2.0 * iv.lo;
    else w = 0.5 * (iv.lo + iv.hi);
    cert.witness = w;
    trials.push_back(w);
  }
  // Without a witness, report the best slack among natural trial values; it
  // is nonpositive because no c > 0 satisfies both strict inequalities.
  if (max_f != min_f) {
    const double cross = (min_scal + max_scal) / (max_f + min_f);
    if (cross > 0.0 && std::isfinite(cross)) trials.push_back(cross);
  }
  trials.push_back(1.0);
  double best_c = trials.front();
  double best = -kInf;
  for (double c : trials) {
    const double s = kw_slack(c, min_f, max_f, min_scal, max_scal);
    if (s > best || (cert.witness && c == *cert.witness)) {
      best = s;
      best_c = c;
    }
    if (cert.witness) break;
  }
  cert.pass = cert.witness.has_value();
  cert.alpha = best;
  cert.details = {{"min_f", min_f},       {"max_f", max_f},          {"min_scal", min_scal},
                  {"max_scal", max_scal}, {"c_trial", best_c},       {"interval_lo", iv.lo},
                  {"interval_hi", iv.hi}, {"interval_empty", iv.empty ? 1.0 : 0.0}};
  if (cert.pass && !(cert.alpha > 0.0)) {
    // Rounding at a near-tie: the interval is nonempty in floating point but
    // the slack at the witness does not confirm it.
    cert.pass = false;
    cert.witness.reset();
    cert.note = "interval nonempty only within rounding; treated as a tie";
  }
  return cert;
}

Certificate check_kw(const ScalarField& f, const ScalarField& scal) {
  if (f.size() != scal.size()) throw MismatchError("Kazdan-Warner fields must share a node set");
  return check_kw(f.min(), f.max(), scal.min(), scal.max());
}

CanonicalResult check_canonical(const FiberSpec& fiber, const ScalarField& f, const CanonicalScanFields& scan,
                                double t_min, int points) {
  fiber.validate();
  const double limit = curvature::canonical_ratio_limit(fiber);
  const double min_f = f.min();
  const double max_f = f.max();
  if (max_f == 0.0) throw DomainError("canonical-variation scan requires max f ≠ 0");
  if (!(t_min < 0.0)) throw DomainError(fmt::format("t_min must be negative, got {}", t_min));
  if (points < 2) throw DomainError("canonical-variation scan needs at least two grid points");
  const auto [scal_f_min, scal_f_max] = *fiber.scal_range;
  const double f_ratio = min_f / max_f;

  CanonicalResult out;
  out.limit_ratio = limit;
  out.rows.reserve(static_cast<std::size_t>(points));
  Certificate& cert = out.certificate;
  cert.theorem = TheoremId::canonical_variation;

  double best_alpha = -kInf;
  std::optional<std::size_t> best_row;
  Certificate best_kw;
  for (int j = 0; j < points; ++j) {
    const double t = t_min * static_cast<double>(j) / static_cast<double>(points - 1);
    const auto low = curvature::canonical_scal_t(t, scan.scal_b, scan.scal_g_horiz, scan.a_norm_sq, scal_f_min);
    const auto high = curvature::canonical_scal_t(t, scan.scal_b, scan.scal_g_horiz, scan.a_norm_sq, scal_f_max);
    const double s_t = low.min();
    const double S_t = high.max();
    const double ratio = s_t / S_t;
    out.rows.push_back({t, s_t, S_t, ratio});
    if (cert.pass) continue;

    const double margin = ratio - f_ratio;
    const Certificate kw = check_kw(min_f, max_f, s_t, S_t);
    const double a = std::min(margin, kw.alpha);
    if (margin > 0.0 && kw.pass) {
      cert.pass = true;
      cert.witness = t;
      best_alpha = a;
      best_row = out.rows.size() - 1;
      best_kw = kw;
    } else if (a > best_alpha) {
      best_alpha = a;
      best_row = out.rows.size() - 1;
      best_kw = kw;
    }
  }

  const auto& row = out.rows[*best_row];
  cert.alpha = best_alpha;
  cert.details = {{"t", row.t},
                  {"s_t", row.s_t},
                  {"S_t", row.S_t},
                  {"ratio", row.ratio},
                  {"min_f", min_f},
                  {"max_f", max_f},
                  {"f_ratio", f_ratio},
                  {"limit_ratio", limit},
                  {"t_min", t_min},
                  {"points", static_cast<double>(points)},
                  {"c_trial", best_kw.details.at("c_trial")},
                  {"kw_alpha", best_kw.alpha}};
  if (!cert.pass)
    cert.note = f_ratio < limit ? "ratio criterion not reached on the scanned t range"
                                : "min f / max f is not below the limiting ratio";
  return out;
}

}  // namespace pscal::feasibility
