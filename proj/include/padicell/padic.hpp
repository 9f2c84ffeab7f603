#pragma once

// Finite-precision arithmetic in Q_p and in the ramified quadratic extension
// Q_p(alpha), alpha^2 = a_p alpha - p, together with the Teichmuller
// decomposition, p-adic log/exp and related helpers.
//
// Precision model: every value knows its absolute precision (it is known
// modulo p^abs_prec). A value whose residue vanishes is a "zero to
// precision" O(p^k); the exact zero has infinite precision. Integers and
// rationals entered without an explicit precision are stored with the
// largest relative precision that fits the 62-bit residue.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "padicell/error.hpp"
#include "padicell/exactla.hpp"

namespace padicell {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr i64 infinite_precision = std::numeric_limits<i64>::max() / 4;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Largest r with p^r < 2^62.
inline int max_relative_precision(u64 p) {
  int r = 0;
  u128 x = 1;
  while (x * p < (u128(1) << 62)) {
    x *= p;
    ++r;
  }
  return r;
}

inline u64 ipow(u64 b, i64 e) {
  u64 r = 1;
  for (i64 i = 0; i < e; ++i) r *= b;
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline i64 mod_floor(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Inverse of a modulo m; a must be coprime to m.
inline u64 invmod(u64 a, u64 m) {
  if (m == 1) return 0;
  __int128 t = 0, new_t = 1, r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw error(errc::not_a_unit, "value is not invertible modulo the prime power");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

inline i64 valuation_of(i64 n, u64 p) {
  if (n == 0) return infinite_precision;
  i64 v = 0;
  u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

inline i64 valuation_of(big_int n, u64 p) {
  if (n == 0) return infinite_precision;
  i64 v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

class padic {
 public:
  static constexpr int units_per_digit = 1;

  padic() = default;

  static padic zero(u64 p, i64 abs_prec = infinite_precision) {
    padic z;
    z.p_ = p;
    z.val_ = abs_prec;
    return z;
  }

  static padic from_parts(u64 p, i64 val, u64 unit, int rel) {
    padic x;
    x.p_ = p;
    if (rel <= 0) return zero(p, val);
    x.val_ = val;
    x.rel_ = rel;
    x.unit_ = unit % ipow(p, rel);
    if (x.unit_ % p == 0) throw error(errc::invalid_argument, "unit part divisible by p");
    return x;
  }

  static padic from_integer(u64 p, i64 n, i64 abs_prec = infinite_precision) {
    check_prime(p);
    if (n == 0) return zero(p, abs_prec);
    const bool neg = n < 0;
    u64 m = neg ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    i64 v = 0;
    while (m % p == 0) {
      m /= p;
      ++v;
    }
    const i64 cap = max_relative_precision(p);
    const i64 rel = std::min<i64>(cap, abs_prec >= infinite_precision ? cap : abs_prec - v);
    if (rel <= 0) return zero(p, abs_prec);
    const u64 mod = ipow(p, rel);
    m %= mod;
    padic x;
    x.p_ = p;
    x.val_ = v;
    x.rel_ = static_cast<int>(rel);
    x.unit_ = neg ? mod - m : m;
    return x;
  }

  static padic from_big(u64 p, const big_int& n, i64 abs_prec = infinite_precision) {
    check_prime(p);
    if (n == 0) return zero(p, abs_prec);
    big_int m = n;
    i64 v = 0;
    while (m % p == 0) {
      m /= p;
      ++v;
    }
    return from_unit_big(p, v, m, big_int(1), abs_prec);
  }

  static padic from_rational(u64 p, const big_rational& q, i64 abs_prec = infinite_precision) {
    check_prime(p);
    if (q == 0) return zero(p, abs_prec);
    big_int num = numerator_of(q), den = denominator_of(q);
    i64 v = 0;
    while (num % p == 0) {
      num /= p;
      ++v;
    }
    while (den % p == 0) {
      den /= p;
      --v;
    }
    return from_unit_big(p, v, num, den, abs_prec);
  }

  u64 prime() const { return p_; }
  bool is_zero() const { return unit_ == 0; }
  bool is_exact_zero() const { return unit_ == 0 && val_ >= infinite_precision; }
  /// Valuation; for a zero this is the precision, a lower bound.
  i64 valuation() const { return val_; }
  i64 abs_prec() const { return is_zero() ? val_ : val_ + rel_; }
  int rel_prec() const { return rel_; }
  u64 unit() const { return unit_; }

  i64 valuation_units() const { return valuation(); }
  i64 precision_units() const { return abs_prec(); }
  padic truncated_units(i64 k) const { return with_abs_prec(k); }
  padic like(i64 n) const { return from_integer(p_, n); }
  padic like(const padic& x) const { return x; }
  padic like_rational(const big_rational& q) const { return from_rational(p_, q); }

  padic with_abs_prec(i64 n) const {
    if (n >= abs_prec()) return *this;
    if (is_zero() || n <= val_) return zero(p_, n);
    padic x = *this;
    x.rel_ = static_cast<int>(n - val_);
    x.unit_ %= ipow(p_, x.rel_);
    return x;
  }

  padic operator-() const {
    if (is_zero()) return *this;
    padic x = *this;
    x.unit_ = ipow(p_, rel_) - unit_;
    return x;
  }

  friend padic operator+(const padic& a, const padic& b) {
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    a.check_same(b);
    const i64 n = std::min(a.abs_prec(), b.abs_prec());
    if (a.is_zero()) return b.with_abs_prec(n);
    if (b.is_zero()) return a.with_abs_prec(n);
    const i64 v = std::min(a.val_, b.val_);
    if (n <= v) return zero(a.p_, n);
    const int r = static_cast<int>(n - v);
    const u64 m = ipow(a.p_, r);
    auto shifted = [&](const padic& x) -> u64 {
      const i64 s = x.val_ - v;
      if (s >= r) return 0;
      return (x.unit_ % ipow(x.p_, r - s)) * ipow(x.p_, s);
    };
    u64 sum = (shifted(a) + shifted(b)) % m;
    if (sum == 0) return zero(a.p_, n);
    int k = 0;
    while (sum % a.p_ == 0) {
      sum /= a.p_;
      ++k;
    }
    padic out;
    out.p_ = a.p_;
    out.val_ = v + k;
    out.rel_ = r - k;
    out.unit_ = sum;
    return out;
  }

  friend padic operator-(const padic& a, const padic& b) { return a + (-b); }

  friend padic operator*(const padic& a, const padic& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return zero(a.p_ ? a.p_ : b.p_);
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return zero(a.p_, a.val_ + b.val_);
    const int r = std::min(a.rel_, b.rel_);
    const u64 m = ipow(a.p_, r);
    padic out;
    out.p_ = a.p_;
    out.val_ = a.val_ + b.val_;
    out.rel_ = r;
    out.unit_ = mulmod(a.unit_ % m, b.unit_ % m, m);
    return out;
  }

  padic inverse() const {
    if (is_zero()) throw error(errc::out_of_domain, "division by a p-adic zero");
    padic out = *this;
    out.val_ = -val_;
    out.unit_ = invmod(unit_, ipow(p_, rel_));
    return out;
  }

  friend padic operator/(const padic& a, const padic& b) {
    if (b.is_zero()) throw error(errc::out_of_domain, "division by a p-adic zero");
    if (a.is_exact_zero()) return a;
    if (a.is_zero()) return zero(a.p_, a.val_ - b.val_);
    return a * b.inverse();
  }

  padic& operator+=(const padic& b) { return *this = *this + b; }
  padic& operator-=(const padic& b) { return *this = *this - b; }
  padic& operator*=(const padic& b) { return *this = *this * b; }
  padic& operator/=(const padic& b) { return *this = *this / b; }

  padic pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    padic result = from_integer(p_, 1);
    padic base = *this;
    while (e) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  /// Representative in [0, p^k) of a p-adic integer known to at least k digits.
  u64 residue(int k) const {
    if (k > abs_prec())
      throw error(errc::precision_exhausted, "residue requested beyond known precision");
    if (is_zero() || val_ >= k) return 0;
    if (val_ < 0) throw error(errc::out_of_domain, "residue of a non-integral p-adic");
    const u64 m = ipow(p_, k);
    return mulmod(unit_ % m, ipow(p_, val_), m);
  }

  /// Signed residue in (-p^k/2, p^k/2].
  i64 signed_residue(int k) const {
    const u64 m = ipow(p_, k);
    const u64 r = residue(k);
    return r > m / 2 ? static_cast<i64>(r) - static_cast<i64>(m) : static_cast<i64>(r);
  }

  /// Base-p digits of the unit part, least significant first.
  std::vector<u64> digits() const {
    std::vector<u64> out;
    u64 u = unit_;
    for (int i = 0; i < rel_; ++i) {
      out.push_back(u % p_);
      u /= p_;
    }
    return out;
  }

  std::string str() const {
    if (is_exact_zero()) return "0";
    if (is_zero()) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    std::string s = std::to_string(unit_);
    if (val_ != 0) s += "*" + std::to_string(p_) + "^" + std::to_string(val_);
    return s + " + O(" + std::to_string(p_) + "^" + std::to_string(abs_prec()) + ")";
  }

 private:
  static void check_prime(u64 p) {
    if (p < 3 || !is_prime(p)) throw error(errc::invalid_argument, "p must be an odd prime");
  }

  void check_same(const padic& b) const {
    if (p_ != b.p_) throw error(errc::invalid_argument, "mixing p-adic numbers for different primes");
  }

  static padic from_unit_big(u64 p, i64 v, const big_int& num, const big_int& den, i64 abs_prec) {
    const i64 cap = max_relative_precision(p);
    const i64 rel = std::min<i64>(cap, abs_prec >= infinite_precision ? cap : abs_prec - v);
    if (rel <= 0) return zero(p, abs_prec);
    const u64 m = ipow(p, rel);
    big_int nm = num % m;
    if (nm < 0) nm += m;
    big_int dm = den % m;
    if (dm < 0) dm += m;
    u64 unit = mulmod(static_cast<u64>(nm), invmod(static_cast<u64>(dm), m), m);
    padic x;
    x.p_ = p;
    x.val_ = v;
    x.rel_ = static_cast<int>(rel);
    x.unit_ = unit;
    return x;
  }

  u64 p_ = 0;
  i64 val_ = infinite_precision;  // for zeros: absolute precision
  u64 unit_ = 0;                  // 0 iff zero to precision
  int rel_ = 0;
};

/// Elements c + d*alpha of Q_p(alpha) with alpha^2 = a_p alpha - p and
/// p | a_p, so alpha is a uniformiser of valuation 1/2. Valuations and
/// precisions are counted in half-digits.
class padic_quad {
 public:
  static constexpr int units_per_digit = 2;

  padic_quad() = default;
  padic_quad(padic c, padic d, i64 ap) : c_(std::move(c)), d_(std::move(d)), ap_(ap) {
    p_ = c_.prime() ? c_.prime() : d_.prime();
    if (p_ && ap_ % static_cast<i64>(p_) != 0)
      throw error(errc::invalid_argument, "quadratic extension requires p | a_p");
  }

  static padic_quad from_padic(const padic& c, i64 ap) {
    return padic_quad(c, padic::zero(c.prime()), ap);
  }

  /// The root alpha itself.
  static padic_quad alpha(u64 p, i64 ap) {
    return padic_quad(padic::zero(p), padic::from_integer(p, 1), ap);
  }

  const padic& c() const { return c_; }
  const padic& d() const { return d_; }
  i64 ap() const { return ap_; }
  u64 prime() const { return p_; }

  /// The other root substituted for alpha: alpha -> a_p - alpha.
  padic_quad conj() const {
    return padic_quad(c_ + d_ * padic::from_integer(p_, ap_), -d_, ap_);
  }

  padic norm() const {
    const padic ap = padic::from_integer(p_, ap_);
    const padic pp = padic::from_integer(p_, static_cast<i64>(p_));
    return c_ * c_ + ap * c_ * d_ + pp * d_ * d_;
  }

  padic_quad inverse() const {
    if (is_zero()) throw error(errc::out_of_domain, "division by a zero of Q_p(alpha)");
    const padic n = norm();
    padic_quad cj = conj();
    return padic_quad(cj.c_ / n, cj.d_ / n, ap_);
  }

  i64 precision_units() const {
    const i64 pc = c_.abs_prec(), pd = d_.abs_prec();
    return std::min(sat2(pc), sat2(pd) + (pd >= infinite_precision ? 0 : 1));
  }

  i64 valuation_units() const {
    i64 v = precision_units();
    if (!c_.is_zero()) v = std::min(v, 2 * c_.valuation());
    if (!d_.is_zero()) v = std::min(v, 2 * d_.valuation() + 1);
    return v;
  }

  bool is_zero() const { return valuation_units() >= precision_units(); }
  bool is_exact_zero() const { return c_.is_exact_zero() && d_.is_exact_zero(); }

  padic_quad truncated_units(i64 k) const {
    return padic_quad(c_.with_abs_prec(floor_div(k + 1, 2)), d_.with_abs_prec(floor_div(k, 2)), ap_);
  }

  padic_quad like(i64 n) const { return from_padic(padic::from_integer(p_, n), ap_); }
  padic_quad like(const padic& x) const { return from_padic(x, ap_); }
  padic_quad like_rational(const big_rational& q) const {
    return from_padic(padic::from_rational(p_, q), ap_);
  }

  padic_quad operator-() const { return padic_quad(-c_, -d_, ap_); }

  friend padic_quad operator+(const padic_quad& a, const padic_quad& b) {
    return padic_quad(a.c_ + b.c_, a.d_ + b.d_, a.ap_);
  }
  friend padic_quad operator-(const padic_quad& a, const padic_quad& b) { return a + (-b); }

  friend padic_quad operator*(const padic_quad& a, const padic_quad& b) {
    const u64 p = a.p_ ? a.p_ : b.p_;
    const padic ap = padic::from_integer(p, a.ap_);
    const padic pp = padic::from_integer(p, static_cast<i64>(p));
    const padic dd = a.d_ * b.d_;
    return padic_quad(a.c_ * b.c_ - pp * dd, a.c_ * b.d_ + a.d_ * b.c_ + ap * dd, a.ap_);
  }

  friend padic_quad operator/(const padic_quad& a, const padic_quad& b) { return a * b.inverse(); }

  friend padic_quad operator*(const padic_quad& a, const padic& s) {
    return padic_quad(a.c_ * s, a.d_ * s, a.ap_);
  }

  padic_quad& operator+=(const padic_quad& b) { return *this = *this + b; }
  padic_quad& operator-=(const padic_quad& b) { return *this = *this - b; }
  padic_quad& operator*=(const padic_quad& b) { return *this = *this * b; }

  padic_quad pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    padic_quad result = like(1);
    padic_quad base = *this;
    while (e) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  std::string str() const { return "(" + c_.str() + ") + (" + d_.str() + ")*alpha"; }

 private:
  static i64 sat2(i64 x) { return x >= infinite_precision ? infinite_precision : 2 * x; }

  padic c_, d_;
  i64 ap_ = 0;
  u64 p_ = 0;
};

// ---------------------------------------------------------------------------
// Teichmuller decomposition, log/exp, Hensel lifting.

/// omega(a): the (p-1)-st root of unity congruent to a mod p, to prec digits.
inline padic teichmuller(i64 a, u64 p, int prec) {
  if (valuation_of(a, p) > 0) throw error(errc::not_a_unit, "Teichmuller lift of a non-unit");
  prec = std::min(prec, max_relative_precision(p));
  const u64 m = ipow(p, prec);
  u64 x = static_cast<u64>(mod_floor(a, static_cast<i64>(p)));
  for (int i = 0; i < prec; ++i) x = powmod(x, p, m);
  return padic::from_parts(p, 0, x, prec);
}

inline padic teichmuller(const padic& x) {
  if (x.is_zero() || x.valuation() != 0) throw error(errc::not_a_unit, "Teichmuller lift of a non-unit");
  return teichmuller(static_cast<i64>(x.unit() % x.prime()), x.prime(), x.rel_prec());
}

/// <x> = x / omega(x), the 1-unit part.
inline padic angle_part(const padic& x) { return x / teichmuller(x); }

namespace detail {
inline i64 ilog(u64 p, i64 k) {
  i64 r = 0;
  while (k >= static_cast<i64>(p)) {
    k /= static_cast<i64>(p);
    ++r;
  }
  return r;
}
}  // namespace detail

/// p-adic logarithm on 1 + pZ_p.
inline padic plog(const padic& x) {
  const u64 p = x.prime();
  const padic one = padic::from_integer(p, 1);
  const padic u = x - one;
  if (u.is_exact_zero()) return padic::zero(p);
  if (u.valuation() < 1) throw error(errc::out_of_domain, "log needs x = 1 mod p");
  const i64 target = std::min<i64>(x.abs_prec(), u.valuation() + max_relative_precision(p));
  if (u.is_zero()) return padic::zero(p, target);
  const i64 v = u.valuation();
  padic sum = padic::zero(p);
  padic power = one;
  for (i64 k = 1;; ++k) {
    if (k * v - detail::ilog(p, k) >= target) break;
    power *= u;
    padic term = power / padic::from_integer(p, k);
    sum = (k % 2 == 1) ? sum + term : sum - term;
  }
  return sum.with_abs_prec(target);
}

/// p-adic exponential on pZ_p (p odd).
inline padic pexp(const padic& x) {
  const u64 p = x.prime();
  const padic one = padic::from_integer(p, 1);
  if (x.is_exact_zero()) return one;
  if (x.valuation() < 1) throw error(errc::out_of_domain, "exp needs v_p(x) >= 1");
  const i64 target = std::min<i64>(x.abs_prec(), x.valuation() + max_relative_precision(p));
  const i64 v = x.is_zero() ? target : x.valuation();
  padic sum = one;
  padic term = one;
  for (i64 k = 1;; ++k) {
    // v_p(k!) <= (k - 1)/(p - 1)
    if (k * v - (k - 1) / static_cast<i64>(p - 1) >= target) break;
    term = term * x / padic::from_integer(p, k);
    sum += term;
  }
  return sum.with_abs_prec(target);
}

/// The fixed topological generator kappa(gamma) = 1 + p and its logarithm.
struct cyclotomic_generator {
  u64 p = 0;
  padic kappa;
  padic log_kappa;

  explicit cyclotomic_generator(u64 prime) : p(prime) {
    kappa = padic::from_integer(p, 1 + static_cast<i64>(p));
    log_kappa = plog(kappa);
  }
};

/// c in [0, p^(n-1)) with (1+p)^c = <a> mod p^n.
inline u64 one_unit_dlog(i64 a, u64 p, int n) {
  if (n < 1) throw error(errc::invalid_argument, "level must be >= 1");
  if (valuation_of(a, p) > 0) throw error(errc::not_a_unit, "discrete log of a non-unit");
  if (n == 1) return 0;
  const padic x = padic::from_integer(p, a);
  const padic e = plog(angle_part(x)) / plog(padic::from_integer(p, 1 + static_cast<i64>(p)));
  if (e.abs_prec() < n - 1) throw error(errc::precision_exhausted, "level exceeds working precision");
  return e.residue(n - 1);
}

/// Unit root of X^2 - a_p X + p (ordinary case).
inline padic hensel_unit_root(i64 ap, u64 p, int prec) {
  if (valuation_of(ap, p) > 0) throw error(errc::not_ordinary, "p divides a_p");
  prec = std::min(prec, max_relative_precision(p));
  const u64 m = ipow(p, prec);
  const u64 apm = static_cast<u64>(mod_floor(ap, static_cast<i64>(m)));
  u64 x = static_cast<u64>(mod_floor(ap, static_cast<i64>(p)));
  for (int i = 0; i <= prec + 1; ++i) {
    // f(x) = x^2 - a_p x + p, f'(x) = 2x - a_p
    u64 fx = (mulmod(x, x, m) + m - mulmod(apm, x, m) + p % m) % m;
    u64 dfx = (2 * x % m + m - apm) % m;
    x = (x + m - mulmod(fx, invmod(dfx, m), m)) % m;
  }
  return padic::from_parts(p, 0, x, prec);
}

/// C(e, k) = e(e-1)...(e-k+1)/k! for e in Z_p.
inline padic padic_binomial(const padic& e, i64 k) {
  const u64 p = e.prime();
  padic num = padic::from_integer(p, 1);
  for (i64 i = 0; i < k; ++i) num *= e - padic::from_integer(p, i);
  padic den = padic::from_integer(p, 1);
  for (i64 i = 2; i <= k; ++i) den *= padic::from_integer(p, i);
  return num / den;
}

}  // namespace padicell
