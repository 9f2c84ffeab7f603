#pragma once

// The measures mu_alpha^{+/-} and Riemann-sum approximations of the p-adic
// L-series in T and in s - 1.

#include <algorithm>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "padicell/charset.hpp"
#include "padicell/curve.hpp"
#include "padicell/modsym.hpp"
#include "padicell/pseries.hpp"

namespace padicell {

/// Largest divisor of N coprime to m.
inline i64 largest_coprime_divisor(i64 N, i64 m) {
  i64 Q = N;
  for (i64 q : prime_factors(N))
    if (m % q == 0)
      while (Q % q == 0) Q /= q;
  return Q;
}

struct measure_context {
  const curve_data* curve = nullptr;
  const symbol_pair* symbols = nullptr;
  u64 p = 0;
  padic_root alpha;
  reduction_info reduction;
  character psi;
  i64 M = 1;
  int sign = 1;
  cyclotomic_generator gen{3};

  const modular_symbol_map& map() const { return symbols->for_sign(sign); }
  int delta() const { return reduction.delta; }
  bool supersingular() const { return std::holds_alternative<padic_quad>(alpha); }
  /// Largest divisor of N coprime to p M.
  i64 Q() const { return largest_coprime_divisor(curve->N, static_cast<i64>(p) * M); }
  /// p-adic valuation of the common denominator of the symbols in use.
  i64 denominator_valuation() const { return valuation_of(map().denominator(), p); }
};

/// Builds a context; the symbol sign is bound to psi(-1).
inline measure_context make_context(const curve_data& E, const symbol_pair& symbols, u64 p,
                                    const padic_root& alpha, const character& psi) {
  if (psi.prime() != p) throw error(errc::invalid_argument, "character prime differs from p");
  measure_context ctx;
  ctx.curve = &E;
  ctx.symbols = &symbols;
  ctx.p = p;
  ctx.reduction = reduction_type(E, static_cast<i64>(p));
  require_semistable(ctx.reduction);
  const bool quad = std::holds_alternative<padic_quad>(alpha);
  if (quad != (ctx.reduction.kind == reduction_kind::good_supersingular))
    throw error(errc::invalid_argument, "root type does not match the reduction type");
  ctx.alpha = alpha;
  ctx.psi = psi;
  ctx.M = psi.M();
  if (std::gcd(ctx.M, E.N) != 1 && ctx.M != 1)
    throw error(errc::conductor_clash, "character conductor shares a prime with N");
  ctx.sign = psi.sign();
  ctx.gen = cyclotomic_generator(p);
  return ctx;
}

/// mu(a + p^k M Z_p) = alpha^{-k} [a/(M p^k)] - (1 - delta) alpha^{-k-1} [a/(M p^{k-1})].
template <class K>
K measure_value_in(const measure_context& ctx, const K& alpha, i64 a, int k) {
  if (k < 1) throw error(errc::invalid_argument, "level must be >= 1");
  const i64 p = static_cast<i64>(ctx.p);
  if (std::gcd(a, p * ctx.M) != 1) throw error(errc::invalid_argument, "a must be coprime to pM");
  const i64 pk = static_cast<i64>(ipow(ctx.p, k));
  const auto& m = ctx.map();
  K v = alpha.pow(-k) * alpha.like_rational(m.eval(a, ctx.M * pk));
  if (ctx.delta() == 0) v -= alpha.pow(-k - 1) * alpha.like_rational(m.eval(a, ctx.M * pk / p));
  return v;
}

inline padic_root measure_value(const measure_context& ctx, i64 a, int k) {
  return std::visit([&](const auto& al) -> padic_root { return measure_value_in(ctx, al, a, k); }, ctx.alpha);
}

inline std::string alpha_repr(const padic_root& a) {
  return std::visit([](const auto& x) { return x.str(); }, a);
}

template <class K>
struct lp_approximation {
  std::string curve;
  u64 p = 0;
  std::string alpha;
  character psi;
  int level = 0;
  int t_order = 0;
  power_series<K> series;
  std::vector<i64> apriori_units;   // a-priori precision per coefficient
  i64 valuation_floor_units = 0;    // lower bound for all coefficient valuations
};

/// A-priori precision of the T^j coefficient at level n, in valuation units.
inline i64 apriori_precision_units(bool supersingular, u64 p, int n, std::size_t j, i64 d) {
  if (j == 0) return infinite_precision;
  const i64 lg = detail::ilog(p, static_cast<i64>(j));
  if (supersingular) return n - 4 - 2 * d - 2 * lg;
  return n - 1 - lg - d;
}

/// Raw level-n Riemann sum: coefficients of T^0..T^t_order with only
/// arithmetic precision tracking.
template <class K>
power_series<K> riemann_sum(const measure_context& ctx, const K& alpha, int n, int t_order, unsigned threads = 0) {
  const u64 p = ctx.p;
  if (n < 1) throw error(errc::invalid_argument, "level must be >= 1");
  if (t_order < 0) throw error(errc::invalid_argument, "t_order must be >= 0");
  if (n > max_relative_precision(p)) throw error(errc::precision_exhausted, "level exceeds working precision");
  const i64 pn1 = static_cast<i64>(ipow(p, n - 1));
  if (t_order >= pn1 && !(n == 1 && t_order == 0))
    throw error(errc::level_too_low, "t_order must be below p^(n-1)");
  const int W = max_relative_precision(p);
  const u64 mod = ipow(p, W);
  const i64 pn = pn1 * static_cast<i64>(p);
  const i64 M = ctx.M;
  const std::size_t T = static_cast<std::size_t>(t_order) + 1;

  // (1+p)^c mod p^n -> c
  std::vector<std::uint32_t> dlog(static_cast<std::size_t>(pn), 0);
  {
    u64 x = 1;
    for (i64 c = 0; c < pn1; ++c) {
      dlog[x] = static_cast<std::uint32_t>(c);
      x = mulmod(x, 1 + p, static_cast<u64>(pn));
    }
  }
  std::vector<u64> omega_inv(p, 0);
  for (u64 r = 1; r < p; ++r)
    omega_inv[r] = invmod(teichmuller(static_cast<i64>(r), p, n).unit() % static_cast<u64>(pn), static_cast<u64>(pn));
  // C(c, j) mod p^W
  std::vector<u64> binom(static_cast<std::size_t>(pn1) * T, 0);
  for (i64 c = 0; c < pn1; ++c)
    for (std::size_t j = 0; j < T; ++j) {
      u64 v;
      if (j == 0) v = 1;
      else if (c == 0) v = 0;
      else v = (binom[(c - 1) * T + j] + binom[(c - 1) * T + j - 1]) % mod;
      binom[c * T + j] = v;
    }

  const auto& map = ctx.map();
  const bool two_terms = ctx.delta() == 0;
  const i64 total = pn * M;
  const std::size_t cells = static_cast<std::size_t>(p) * T;

  auto work = [&](i64 lo, i64 hi, std::vector<u64>& S1, std::vector<u64>& S2) {
    for (i64 a = lo; a < hi; ++a) {
      if (a % static_cast<i64>(p) == 0) continue;
      const int q = ctx.psi.quadratic(a);
      if (q == 0) continue;
      const u64 r = static_cast<u64>(a % static_cast<i64>(p));
      const u64 ang = mulmod(static_cast<u64>(a % pn), omega_inv[r], static_cast<u64>(pn));
      const i64 c = dlog[ang];
      const i64 n1 = map.eval_numerator(a, M * pn) * q;
      const u64 m1 = static_cast<u64>(mod_floor(n1, static_cast<i64>(mod)));
      u64 m2 = 0;
      if (two_terms) m2 = static_cast<u64>(mod_floor(map.eval_numerator(a, M * pn1) * q, static_cast<i64>(mod)));
      for (std::size_t j = 0; j < T; ++j) {
        const u64 b = binom[c * T + j];
        if (!b) continue;
        S1[r * T + j] = (S1[r * T + j] + mulmod(b, m1, mod)) % mod;
        if (two_terms) S2[r * T + j] = (S2[r * T + j] + mulmod(b, m2, mod)) % mod;
      }
    }
  };

  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  if (total < 20000) nt = 1;
  nt = std::min<unsigned>(nt, 64);
  std::vector<std::vector<u64>> S1(nt, std::vector<u64>(cells, 0)), S2(nt, std::vector<u64>(cells, 0));
  if (nt == 1) {
    work(1, total + 1, S1[0], S2[0]);
  } else {
    std::vector<std::thread> pool;
    const i64 chunk = (total + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
      const i64 lo = 1 + t * chunk, hi = std::min<i64>(total + 1, lo + chunk);
      pool.emplace_back([&, t, lo, hi] { work(lo, hi, S1[t], S2[t]); });
    }
    for (auto& th : pool) th.join();
    for (unsigned t = 1; t < nt; ++t)
      for (std::size_t k = 0; k < cells; ++k) {
        S1[0][k] = (S1[0][k] + S1[t][k]) % mod;
        S2[0][k] = (S2[0][k] + S2[t][k]) % mod;
      }
  }

  const padic den = padic::from_integer(p, map.denominator());
  const K a_n = alpha.pow(-n), a_n1 = alpha.pow(-n - 1);
  std::vector<padic> omega_j(p);
  for (u64 r = 1; r < p; ++r)
    omega_j[r] = ctx.psi.j() == 0 ? padic::from_integer(p, 1)
                                  : teichmuller(static_cast<i64>(r), p, W).pow(ctx.psi.j());
  std::vector<K> coeffs;
  for (std::size_t j = 0; j < T; ++j) {
    padic A = padic::zero(p), B = padic::zero(p);
    for (u64 r = 1; r < p; ++r) {
      A += omega_j[r] * padic::from_integer(p, static_cast<i64>(S1[0][r * T + j]), W);
      if (two_terms) B += omega_j[r] * padic::from_integer(p, static_cast<i64>(S2[0][r * T + j]), W);
    }
    K c = a_n * A;
    if (two_terms) c -= a_n1 * B;
    coeffs.push_back(c * den.inverse());
  }
  return power_series<K>(std::move(coeffs));
}

/// Level-n approximation whose reported precision is the minimum of the
/// tracked precision, the a-priori bound and agreement with level n - 1.
template <class K>
lp_approximation<K> riemann_series(const measure_context& ctx, const K& alpha, int n, int t_order,
                                   unsigned threads = 0) {
  lp_approximation<K> out;
  out.curve = ctx.curve->label;
  out.p = ctx.p;
  out.alpha = alpha.str();
  out.psi = ctx.psi;
  out.level = n;
  out.t_order = t_order;
  const auto top = riemann_sum(ctx, alpha, n, t_order, threads);
  std::optional<power_series<K>> lower;
  if (n >= 2) {
    const i64 cap = static_cast<i64>(ipow(ctx.p, n - 2)) - 1;
    const int t_low = n == 2 ? 0 : static_cast<int>(std::min<i64>(t_order, cap));
    lower = riemann_sum(ctx, alpha, n - 1, t_low, threads);
  }
  const i64 d = ctx.denominator_valuation();
  const bool ss = ctx.supersingular();
  out.valuation_floor_units = ss ? -(n + 1) - 2 * d : -d;
  std::vector<K> coeffs;
  for (std::size_t j = 0; j < top.size(); ++j) {
    const i64 ap = apriori_precision_units(ss, ctx.p, n, j, d);
    out.apriori_units.push_back(ap);
    i64 prec = std::min(ap, top[j].precision_units());
    if (lower) {
      const K other = j < lower->size() ? (*lower)[j] : top[j].like(0);
      const K diff = top[j] - other;
      prec = std::min(prec, diff.valuation_units());
    }
    coeffs.push_back(top[j].truncated_units(prec));
  }
  out.series = power_series<K>(std::move(coeffs));
  return out;
}

using lp_series_result = std::variant<lp_approximation<padic>, lp_approximation<padic_quad>>;

/// End-to-end: context from curve data and symbols, then riemann_series.
inline lp_series_result lp_series(const curve_data& E, const symbol_pair& symbols, u64 p, const padic_root& alpha,
                                  const character& psi, int n, int t_order, unsigned threads = 0) {
  const auto ctx = make_context(E, symbols, p, alpha, psi);
  return std::visit([&](const auto& al) -> lp_series_result { return riemann_series(ctx, al, n, t_order, threads); },
                    alpha);
}

/// Taylor coefficients at s = 1 of the s-variable function.
template <class K>
power_series<K> taylor_at_1(const lp_approximation<K>& approx, int require = -1) {
  const cyclotomic_generator gen(approx.p);
  auto s = to_s_variable(approx.series, gen.log_kappa);
  if (require >= 0) {
    if (static_cast<std::size_t>(require) >= s.size() || s[require].precision_units() <= 0)
      throw error(errc::precision_exhausted, "requested Taylor coefficient has no certified digits");
  }
  return s;
}

/// Choice of root by selector: "unit" (ordinary or multiplicative), "root1"
/// or "root2" (supersingular).
inline padic_root select_root(const curve_data& E, u64 p, const std::string& selector) {
  const auto roots = allowable_roots(E, static_cast<i64>(p), max_relative_precision(p));
  if (selector == "unit" || selector.empty()) {
    if (roots.size() != 1) throw error(errc::invalid_argument, "supersingular prime: choose root1 or root2");
    return roots[0];
  }
  if (selector == "root1" || selector == "root2") {
    if (roots.size() == 1) {
      if (selector == "root1") return roots[0];
      throw error(errc::invalid_argument, "only one allowable root at this prime");
    }
    return roots[selector == "root1" ? 0 : 1];
  }
  throw error(errc::invalid_argument, "alpha selector must be unit, root1 or root2");
}

}  // namespace padicell
