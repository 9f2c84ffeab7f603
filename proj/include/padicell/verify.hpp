#pragma once

// Checkers for the functional equation, the leading-coefficient relations,
// the parity statement and mu(psi) = mu(psi-bar), at tracked precision.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padicell/lpbuild.hpp"
#include "padicell/pseries.hpp"

namespace padicell {

enum class verdict { pass, fail, indeterminate };

inline std::string to_string(verdict v) {
  switch (v) {
    case verdict::pass: return "pass";
    case verdict::fail: return "fail";
    case verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

struct coefficient_verdict {
  std::size_t k = 0;
  std::string lhs, rhs;
  i64 joint_units = 0;  // absolute precision of the comparison
  i64 agree_units = 0;  // valuation of lhs - rhs, capped at joint_units
  i64 units_per_digit = 1;
  bool certified = false;
  bool mismatch = false;

  double agree_digits() const { return static_cast<double>(agree_units) / static_cast<double>(units_per_digit); }
};

struct check_report {
  std::string check;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<coefficient_verdict> per_coefficient;
  std::vector<std::pair<std::string, std::string>> facts;
  std::vector<std::string> notes;
  verdict result = verdict::indeterminate;
  double certified_digits = 0;

  void fact(const std::string& k, const std::string& v) { facts.emplace_back(k, v); }
  std::optional<std::string> find_fact(const std::string& k) const {
    for (const auto& [a, b] : facts)
      if (a == k) return b;
    return std::nullopt;
  }
  /// Smallest agreement among the certified comparisons, in digits.
  double min_certified_digits() const {
    double m = 1e300;
    for (const auto& c : per_coefficient)
      if (c.certified) m = std::min(m, c.agree_digits());
    return m;
  }
};

inline constexpr i64 display_cap_units = 1000;

template <class K>
coefficient_verdict compare_coefficient(std::size_t k, const K& lhs, const K& rhs) {
  coefficient_verdict c;
  c.k = k;
  c.lhs = lhs.str();
  c.rhs = rhs.str();
  c.units_per_digit = units_of(lhs);
  const i64 joint = std::min(lhs.precision_units(), rhs.precision_units());
  const K diff = lhs - rhs;
  c.mismatch = certified_nonzero(diff) && diff.valuation_units() < joint;
  c.joint_units = std::min(joint, display_cap_units);
  c.agree_units = std::min(c.mismatch ? diff.valuation_units() : joint, display_cap_units);
  c.certified = joint > 0;
  return c;
}

/// Verdict: fail on a certified mismatch, indeterminate if nothing is
/// certified, pass otherwise.
inline void finalize(check_report& r) {
  bool any_cert = false, any_fail = false;
  double digits = 1e300;
  for (const auto& c : r.per_coefficient) {
    any_cert = any_cert || c.certified;
    any_fail = any_fail || c.mismatch;
    digits = std::min(digits, static_cast<double>(c.joint_units) / static_cast<double>(c.units_per_digit));
  }
  r.certified_digits = r.per_coefficient.empty() ? 0 : digits;
  r.result = any_fail ? verdict::fail : (any_cert ? verdict::pass : verdict::indeterminate);
}

/// Combines a sub-verdict into a report (fail dominates, then indeterminate).
inline void merge_verdict(check_report& r, verdict v) {
  if (v == verdict::fail || r.result == verdict::fail)
    r.result = verdict::fail;
  else if (v == verdict::indeterminate || r.result == verdict::indeterminate)
    r.result = verdict::indeterminate;
}

// ---------------------------------------------------------------------------
// Functional equation in T

/// R(T) = sign * (1+T)^{-e} * g((1+T)^{-1} - 1); compared with f.
template <class K>
power_series<K> fe_right_side(const power_series<K>& g, const padic& sign, const padic& e) {
  const auto u = embed_series(onepT_power(-e, g.size()), g[0]);
  return scale(u * subst_recip(g), sign);
}

template <class K>
check_report verify_fe_T(const power_series<K>& f, const power_series<K>& g, const padic& sign, const padic& e,
                         std::size_t kmax) {
  check_report r;
  r.check = "fe";
  const auto R = fe_right_side(g, sign, e);
  const std::size_t n = std::min({f.size(), R.size(), kmax + 1});
  for (std::size_t k = 0; k < n; ++k) r.per_coefficient.push_back(compare_coefficient(k, f[k], R[k]));
  r.fact("sign", sign.str());
  r.fact("exponent", e.str());
  finalize(r);
  return r;
}

/// Data attached to a context: Q, c_Q, psi-bar(-Q), log<Q> and e.
struct fe_data {
  i64 Q = 1;
  int cQ = 1;
  padic psibar_mQ;
  padic psi_mQ;
  padic log_angle_Q;
  padic e;
};

inline padic log_angle(i64 Q, u64 p) {
  return plog(angle_part(padic::from_integer(p, Q)));
}

inline fe_data fe_data_for(const measure_context& ctx) {
  fe_data d;
  d.Q = ctx.Q();
  d.cQ = atkin_lehner_sign(ctx.symbols->plus, d.Q);
  const int W = max_relative_precision(ctx.p);
  d.psibar_mQ = ctx.psi.bar().eval(-d.Q, W);
  d.psi_mQ = ctx.psi.eval(-d.Q, W);
  d.log_angle_Q = log_angle(d.Q, ctx.p);
  d.e = d.log_angle_Q / ctx.gen.log_kappa;
  return d;
}

template <class K>
check_report verify_fe(const measure_context& ctx, const lp_approximation<K>& f, const lp_approximation<K>& g,
                       std::size_t kmax) {
  const auto d = fe_data_for(ctx);
  const padic sign = padic::from_integer(ctx.p, -d.cQ) * d.psibar_mQ;
  auto r = verify_fe_T(f.series, g.series, sign, d.e, kmax);
  r.inputs = {{"curve", f.curve}, {"p", std::to_string(f.p)}, {"psi", f.psi.str()}, {"psi_bar", g.psi.str()},
              {"level", std::to_string(f.level)}, {"alpha", f.alpha}};
  r.fact("Q", std::to_string(d.Q));
  r.fact("c_Q", std::to_string(d.cQ));
  return r;
}

// ---------------------------------------------------------------------------
// Leading-coefficient relations

/// a_{m+k} = -sum_{i<k} (1/(k-i)!) (log_sum/2)^{k-i} a_{m+i} for the odd k
/// up to k_max; k_max = 1 is the sub-leading relation.
template <class K>
check_report verify_s_relation(const power_series<K>& a, const padic& log_sum, int k_max, const std::string& name) {
  check_report r;
  r.check = name;
  const auto ord = order_vanish(a);
  const std::size_t m = ord.m;
  r.fact("m", std::to_string(m));
  r.fact("order_flag", ord.exact ? "exact" : "to_precision");
  const u64 p = log_sum.prime();
  const padic half = log_sum / padic::from_integer(p, 2);
  for (int k = 1; k <= k_max; k += 2) {
    if (m + k >= a.size()) {
      r.notes.push_back("series too short for k = " + std::to_string(k));
      continue;
    }
    K rhs = a[m].like(0);
    big_int fact = 1;
    for (int i = k - 1; i >= 0; --i) {
      fact *= (k - i);
      const padic w = padic::from_rational(p, big_rational(1, fact)) * half.pow(k - i);
      rhs = rhs - a[m + i] * w;
    }
    r.per_coefficient.push_back(compare_coefficient(m + k, a[m + k], rhs));
  }
  finalize(r);
  return r;
}

/// c_{m+1} = -(c_m/2)(log_sum/log kappa + m), plus a_m = c_m (log kappa)^m.
template <class K>
check_report verify_T_relation(const power_series<K>& c, const padic& log_sum, const padic& log_kappa,
                               const std::string& name) {
  check_report r;
  r.check = name;
  const auto ord = order_vanish(c);
  const std::size_t m = ord.m;
  r.fact("m", std::to_string(m));
  r.fact("order_flag", ord.exact ? "exact" : "to_precision");
  const u64 p = log_kappa.prime();
  if (m + 1 < c.size()) {
    const padic w = (log_sum / log_kappa + padic::from_integer(p, static_cast<i64>(m))) /
                    padic::from_integer(p, -2);
    r.per_coefficient.push_back(compare_coefficient(m + 1, c[m + 1], c[m] * w));
  } else {
    r.notes.push_back("series too short");
  }
  // cross-variable: a_m = c_m (log kappa)^m
  const auto a = to_s_variable(c, log_kappa);
  auto cross = compare_coefficient(m, a[m], c[m] * log_kappa.pow(static_cast<i64>(m)));
  r.fact("cross_variable", cross.mismatch ? "mismatch" : (cross.certified ? "agree" : "uncertified"));
  r.per_coefficient.push_back(cross);
  finalize(r);
  return r;
}

inline void require_real(const character& psi) {
  if (!psi.is_real()) throw error(errc::not_real_character, "the relation requires a real character");
}

template <class K>
check_report verify_leading_terms(const measure_context& ctx, const lp_approximation<K>& f, int k_max = 1) {
  require_real(ctx.psi);
  const auto d = fe_data_for(ctx);
  const auto a = taylor_at_1(f);
  auto r = verify_s_relation(a, d.log_angle_Q, k_max, k_max == 1 ? "mains" : "mains-general");
  r.inputs = {{"curve", f.curve}, {"p", std::to_string(f.p)}, {"psi", f.psi.str()}, {"level", std::to_string(f.level)}};
  r.fact("Q", std::to_string(d.Q));
  r.fact("log<Q>", d.log_angle_Q.str());
  return r;
}

template <class K>
check_report verify_leading_terms_T(const measure_context& ctx, const lp_approximation<K>& f) {
  require_real(ctx.psi);
  const auto d = fe_data_for(ctx);
  auto r = verify_T_relation(f.series, d.log_angle_Q, ctx.gen.log_kappa, "main-T");
  r.inputs = {{"curve", f.curve}, {"p", std::to_string(f.p)}, {"psi", f.psi.str()}, {"level", std::to_string(f.level)}};
  r.fact("Q", std::to_string(d.Q));
  return r;
}

// ---------------------------------------------------------------------------
// Parity

/// (-1)^m = -c_Q psi(-Q) for real psi, with the root-number cross-check
/// w_E = -c_N.
template <class K>
check_report verify_parity(const measure_context& ctx, const lp_approximation<K>& f) {
  require_real(ctx.psi);
  check_report r;
  r.check = "parity";
  r.inputs = {{"curve", f.curve}, {"p", std::to_string(f.p)}, {"psi", f.psi.str()}, {"level", std::to_string(f.level)}};
  const auto d = fe_data_for(ctx);
  const int psi_val = d.psi_mQ.is_zero() ? 0 : (d.psi_mQ.residue(1) == 1 ? 1 : -1);
  const int expected = -d.cQ * psi_val;
  r.fact("Q", std::to_string(d.Q));
  r.fact("c_Q", std::to_string(d.cQ));
  r.fact("psi(-Q)", std::to_string(psi_val));
  r.fact("expected_sign", std::to_string(expected));
  const auto ord = order_vanish(f.series);
  r.fact("m", std::to_string(ord.m));
  r.fact("order_flag", ord.exact ? "exact" : "to_precision");
  const int observed = ord.m % 2 == 0 ? 1 : -1;
  const int cN = atkin_lehner_sign(ctx.symbols->plus, ctx.curve->N);
  const int wE = root_number_numeric(*ctx.curve);
  r.fact("c_N", std::to_string(cN));
  r.fact("w_E", std::to_string(wE));
  r.result = (observed == expected && wE == -cN) ? verdict::pass : verdict::fail;
  if (wE != -cN) r.notes.push_back("root number disagrees with -c_N");
  if (observed != expected) r.notes.push_back("order parity disagrees with the sign");
  const auto& c = f.series[ord.m];
  r.certified_digits = static_cast<double>(c.precision_units() - c.valuation_units()) / units_of(c);
  return r;
}

// ---------------------------------------------------------------------------
// mu(psi) = mu(psi-bar)

/// mu-invariant comparison plus the mechanism: mu and lambda are preserved
/// by the substitution and by multiplication with a unit series.
template <class K>
check_report verify_mu_pair(const power_series<K>& f, const power_series<K>& g, const padic& e,
                            std::optional<i64> floor_units = std::nullopt) {
  check_report r;
  r.check = "mu-bar";
  const auto mf = mu_invariant(f, floor_units);
  const auto mg = mu_invariant(g, floor_units);
  r.fact("mu_psi", to_string(mf.value()));
  r.fact("mu_psi_bar", to_string(mg.value()));
  r.fact("mu_psi_certified", mf.certified ? "yes" : "no");
  r.fact("mu_psi_bar_certified", mg.certified ? "yes" : "no");
  r.fact("floor_reached", (mf.floor_reached && mg.floor_reached) ? "yes" : "no");
  if (!mf.certified || !mg.certified) {
    r.result = verdict::indeterminate;
    return r;
  }
  bool ok = mf.units == mg.units;
  const auto ms = mu_invariant(subst_recip(g), floor_units);
  const auto u = embed_series(onepT_power(e, g.size()), g[0]);
  const auto mu_unit = mu_invariant(u * g, floor_units);
  r.fact("mu_subst", to_string(ms.value()));
  r.fact("mu_unit_times", to_string(mu_unit.value()));
  ok = ok && ms.units == mg.units && mu_unit.units == mg.units;
  r.result = ok ? verdict::pass : verdict::fail;
  r.certified_digits = static_cast<double>(std::min(f.size(), g.size()));
  return r;
}

template <class K>
check_report verify_mu_bar(const measure_context& ctx, const lp_approximation<K>& f, const lp_approximation<K>& g) {
  if (ctx.supersingular()) throw error(errc::not_ordinary, "mu comparison requires ordinary reduction");
  const auto d = fe_data_for(ctx);
  auto r = verify_mu_pair(f.series, g.series, d.e);
  r.inputs = {{"curve", f.curve}, {"p", std::to_string(f.p)}, {"psi", f.psi.str()}, {"psi_bar", g.psi.str()},
              {"level", std::to_string(f.level)}};
  return r;
}

}  // namespace padicell
