#pragma once

// Truncated power series over Z_p or its ramified quadratic extension, with
// per-coefficient precision carried by the coefficients themselves.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "padicell/error.hpp"
#include "padicell/exactla.hpp"
#include "padicell/padic.hpp"

namespace padicell {

template <class K>
struct power_series {
  std::vector<K> coeffs;
  std::string var = "T";

  power_series() = default;
  explicit power_series(std::vector<K> c, std::string v = "T") : coeffs(std::move(c)), var(std::move(v)) {}

  std::size_t size() const { return coeffs.size(); }
  const K& operator[](std::size_t k) const { return coeffs.at(k); }
  K& operator[](std::size_t k) { return coeffs.at(k); }

  /// Precision of each coefficient in valuation units.
  std::vector<i64> precisions() const {
    std::vector<i64> out;
    for (const auto& c : coeffs) out.push_back(c.precision_units());
    return out;
  }

  power_series truncated(std::size_t n) const {
    power_series r = *this;
    if (r.coeffs.size() > n) r.coeffs.resize(n);
    return r;
  }
};

inline constexpr i64 units_of(const padic&) { return padic::units_per_digit; }
inline constexpr i64 units_of(const padic_quad&) { return padic_quad::units_per_digit; }

template <class K>
bool certified_nonzero(const K& x) {
  return x.valuation_units() < x.precision_units();
}

template <class K>
K scale_by(const K& a, const padic& s) {
  return a * s;
}

template <class K>
power_series<K> operator+(const power_series<K>& f, const power_series<K>& g) {
  const std::size_t n = std::min(f.size(), g.size());
  std::vector<K> c;
  for (std::size_t k = 0; k < n; ++k) c.push_back(f[k] + g[k]);
  return power_series<K>(std::move(c), f.var);
}

template <class K>
power_series<K> operator-(const power_series<K>& f, const power_series<K>& g) {
  const std::size_t n = std::min(f.size(), g.size());
  std::vector<K> c;
  for (std::size_t k = 0; k < n; ++k) c.push_back(f[k] - g[k]);
  return power_series<K>(std::move(c), f.var);
}

template <class K>
power_series<K> operator*(const power_series<K>& f, const power_series<K>& g) {
  const std::size_t n = std::min(f.size(), g.size());
  std::vector<K> c;
  for (std::size_t k = 0; k < n; ++k) {
    K s = f[0] * g[k];
    for (std::size_t i = 1; i <= k; ++i) s += f[i] * g[k - i];
    c.push_back(s);
  }
  return power_series<K>(std::move(c), f.var);
}

template <class K>
power_series<K> scale(const power_series<K>& f, const padic& s) {
  std::vector<K> c;
  for (const auto& x : f.coeffs) c.push_back(scale_by(x, s));
  return power_series<K>(std::move(c), f.var);
}

/// Maps a Z_p-series into the coefficient ring of proto.
template <class K>
power_series<K> embed_series(const power_series<padic>& f, const K& proto) {
  std::vector<K> c;
  for (const auto& x : f.coeffs) c.push_back(proto.like(x));
  return power_series<K>(std::move(c), f.var);
}

/// g(T) = f((1+T)^{-1} - 1): b_0 = a_0, b_k = (-1)^k sum_{i<k} C(k-1, i) a_{i+1}.
template <class K>
power_series<K> subst_recip(const power_series<K>& f) {
  const std::size_t n = f.size();
  std::vector<K> b;
  if (n == 0) return power_series<K>({}, f.var);
  b.push_back(f[0]);
  std::vector<i64> row{1};  // C(k-1, i)
  for (std::size_t k = 1; k < n; ++k) {
    K s = f[1] * f[0].like(row[0]);
    for (std::size_t i = 1; i < k; ++i) s += f[i + 1] * f[0].like(row[i]);
    b.push_back(k % 2 ? -s : s);
    std::vector<i64> next(row.size() + 1, 1);
    for (std::size_t i = 1; i < row.size(); ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  return power_series<K>(std::move(b), f.var);
}

/// (1+T)^e = sum_k C(e, k) T^k.
inline power_series<padic> onepT_power(const padic& e, std::size_t order) {
  std::vector<padic> c;
  for (std::size_t k = 0; k < order; ++k) c.push_back(padic_binomial(e, static_cast<i64>(k)));
  return power_series<padic>(std::move(c));
}

struct order_result {
  std::size_t m = 0;
  bool exact = false;  // lower coefficients are exact zeros, not zeros to precision
};

/// Smallest index with a certified nonzero coefficient.
template <class K>
order_result order_vanish(const power_series<K>& f) {
  order_result r;
  r.exact = true;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (certified_nonzero(f[k])) {
      r.m = k;
      return r;
    }
    if (!f[k].is_exact_zero()) r.exact = false;
  }
  throw error(errc::indeterminate, "no coefficient is certified nonzero");
}

struct mu_result {
  i64 units = 0;           // minimum valuation in valuation units
  i64 units_per_digit = 1;
  bool certified = false;  // no uncertified coefficient could lie below
  bool floor_reached = false;

  big_rational value() const { return big_rational(units, units_per_digit); }
};

/// Minimum valuation over the coefficients. With a floor (a known lower
/// bound for all coefficients, in units) the result is certified for the
/// untruncated series once the floor is attained.
template <class K>
mu_result mu_invariant(const power_series<K>& f, std::optional<i64> floor_units = std::nullopt) {
  std::optional<i64> best;
  for (const auto& c : f.coeffs)
    if (certified_nonzero(c)) best = best ? std::min(*best, c.valuation_units()) : c.valuation_units();
  if (!best) throw error(errc::indeterminate, "no coefficient is certified nonzero");
  mu_result r;
  r.units = *best;
  r.units_per_digit = f.size() ? units_of(f[0]) : 1;
  r.certified = true;
  for (const auto& c : f.coeffs)
    if (!certified_nonzero(c) && c.precision_units() < *best) r.certified = false;
  r.floor_reached = floor_units && *best <= *floor_units;
  return r;
}

template <class K>
std::size_t lambda_invariant(const power_series<K>& f) {
  const auto mu = mu_invariant(f);
  if (!mu.certified) throw error(errc::indeterminate, "mu is not certified");
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (certified_nonzero(f[k]) && f[k].valuation_units() == mu.units) return k;
    if (f[k].precision_units() <= mu.units) throw error(errc::indeterminate, "lambda hidden below precision");
  }
  throw error(errc::indeterminate, "lambda not found");
}

/// Stirling numbers of the second kind S(i, j), 0 <= j <= i < n.
inline std::vector<std::vector<big_int>> stirling2_table(std::size_t n) {
  std::vector<std::vector<big_int>> S(n, std::vector<big_int>(n, 0));
  if (n) S[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j <= i; ++j) S[i][j] = big_int(j) * S[i - 1][j] + S[i - 1][j - 1];
  return S;
}

/// Re-expands a series in T = exp(L (s-1)) - 1 as a series in s - 1:
/// a_i = sum_{j <= i} c_j j! S(i, j) L^i / i!.
template <class K>
power_series<K> to_s_variable(const power_series<K>& f, const padic& L) {
  const std::size_t n = f.size();
  const auto S = stirling2_table(n);
  std::vector<K> a;
  big_int ifact = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) ifact *= i;
    const padic Li = L.pow(static_cast<i64>(i));
    K s = f[0].like(0);
    big_int jfact = 1;
    bool first = true;
    for (std::size_t j = 0; j <= i; ++j) {
      if (j) jfact *= j;
      if (S[i][j] == 0) continue;
      const padic w = padic::from_rational(L.prime(), big_rational(jfact * S[i][j], ifact)) * Li;
      const K term = scale_by(f[j], w);
      s = first ? term : s + term;
      first = false;
    }
    a.push_back(s);
  }
  return power_series<K>(std::move(a), "s-1");
}

}  // namespace padicell
