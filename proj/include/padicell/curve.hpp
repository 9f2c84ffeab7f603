#pragma once

// Elliptic curves over Q: local data by point counting, q-expansions, the
// real and imaginary periods, and twisted central L-values.

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "padicell/error.hpp"
#include "padicell/exactla.hpp"
#include "padicell/padic.hpp"

namespace padicell {

using real = boost::multiprecision::cpp_bin_float_50;

inline std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  n = n < 0 ? -n : n;
  for (i64 q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline int legendre(i64 a, i64 l) {
  a = mod_floor(a, l);
  if (a == 0) return 0;
  return powmod(static_cast<u64>(a), static_cast<u64>((l - 1) / 2), static_cast<u64>(l)) == 1 ? 1 : -1;
}

struct curve_data {
  std::string label;
  std::array<i64, 5> a{};  // a1, a2, a3, a4, a6
  i64 N = 0;

  i64 b2() const { return a[0] * a[0] + 4 * a[1]; }
  i64 b4() const { return 2 * a[3] + a[0] * a[2]; }
  i64 b6() const { return a[2] * a[2] + 4 * a[4]; }
  i64 b8() const {
    return a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] + a[1] * a[2] * a[2] -
           a[3] * a[3];
  }
  big_int c4() const { return big_int(b2()) * b2() - 24 * big_int(b4()); }
  big_int discriminant() const {
    const big_int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  }

  std::string coefficients_text() const {
    std::ostringstream s;
    s << "[" << a[0] << "," << a[1] << "," << a[2] << "," << a[3] << "," << a[4] << "]";
    return s.str();
  }
};

/// Validates the model against the supplied conductor.
inline curve_data make_curve(std::string label, std::array<i64, 5> a, i64 N) {
  curve_data E{std::move(label), a, N};
  if (N < 1) throw error(errc::invalid_curve, "conductor must be positive");
  const big_int disc = E.discriminant();
  if (disc == 0) throw error(errc::invalid_curve, "singular Weierstrass model");
  for (i64 l : prime_factors(N)) {
    if (disc % l != 0)
      throw error(errc::invalid_curve, "prime " + std::to_string(l) + " divides N but not the discriminant");
    if (l >= 5 && valuation_of(disc, static_cast<u64>(l)) >= 12 &&
        valuation_of(E.c4(), static_cast<u64>(l)) >= 4)
      throw error(errc::invalid_curve, "model is not minimal at " + std::to_string(l));
  }
  return E;
}

/// l + 1 - #E(F_l) counted on the given model, including a singular point.
/// For bad l on a minimal model this is 1, -1 or 0 for split, nonsplit and
/// additive reduction.
inline i64 local_ap(const curve_data& E, i64 l) {
  if (l == 2) {
    i64 count = 1;
    for (i64 x = 0; x < 2; ++x)
      for (i64 y = 0; y < 2; ++y) {
        i64 lhs = y * y + E.a[0] * x * y + E.a[2] * y;
        i64 rhs = x * x * x + E.a[1] * x * x + E.a[3] * x + E.a[4];
        if (mod_floor(lhs - rhs, 2) == 0) ++count;
      }
    return 3 - count;
  }
  const i64 b2 = mod_floor(E.b2(), l), b4 = mod_floor(E.b4(), l), b6 = mod_floor(E.b6(), l);
  i64 s = 0;
  for (i64 x = 0; x < l; ++x) {
    i64 f = (4 * x % l * x % l * x + b2 * x % l * x + 2 * b4 * x + b6) % l;
    s += legendre(f, l);
  }
  return -s;
}

inline i64 ap_count(const curve_data& E, i64 l) {
  if (E.N % l == 0) throw error(errc::bad_prime, std::to_string(l) + " divides the conductor");
  return local_ap(E, l);
}

enum class reduction_kind { good_ordinary, good_supersingular, split_mult, nonsplit_mult, additive };

inline std::string to_string(reduction_kind k) {
  switch (k) {
    case reduction_kind::good_ordinary: return "good_ordinary";
    case reduction_kind::good_supersingular: return "good_supersingular";
    case reduction_kind::split_mult: return "split_mult";
    case reduction_kind::nonsplit_mult: return "nonsplit_mult";
    case reduction_kind::additive: return "additive";
  }
  return "?";
}

struct reduction_info {
  i64 p = 0;
  reduction_kind kind = reduction_kind::good_ordinary;
  i64 ap = 0;
  int delta = 0;

  bool ordinary() const { return kind != reduction_kind::good_supersingular; }
  bool semistable() const { return kind != reduction_kind::additive; }
};

inline reduction_info reduction_type(const curve_data& E, i64 p) {
  if (p < 3 || !is_prime(static_cast<u64>(p))) throw error(errc::invalid_argument, "p must be an odd prime");
  reduction_info r;
  r.p = p;
  const i64 v = valuation_of(E.N, static_cast<u64>(p));
  if (v == 0) {
    r.ap = local_ap(E, p);
    r.kind = r.ap % p == 0 ? reduction_kind::good_supersingular : reduction_kind::good_ordinary;
    r.delta = 0;
  } else if (v == 1) {
    r.ap = local_ap(E, p);
    if (r.ap != 1 && r.ap != -1)
      throw error(errc::invalid_curve, "point count at a multiplicative prime gives a_p = " + std::to_string(r.ap));
    r.kind = r.ap == 1 ? reduction_kind::split_mult : reduction_kind::nonsplit_mult;
    r.delta = 1;
  } else {
    r.kind = reduction_kind::additive;
    r.ap = 0;
    r.delta = 1;
  }
  return r;
}

inline void require_semistable(const reduction_info& r) {
  if (!r.semistable())
    throw error(errc::additive_reduction, "E has additive reduction at p = " + std::to_string(r.p));
}

using padic_root = std::variant<padic, padic_quad>;

/// Allowable p-roots: the unit root, a_p for multiplicative reduction, or
/// both roots alpha and a_p - alpha in the supersingular case.
inline std::vector<padic_root> allowable_roots(const curve_data& E, i64 p, int prec) {
  const auto r = reduction_type(E, p);
  require_semistable(r);
  const u64 up = static_cast<u64>(p);
  switch (r.kind) {
    case reduction_kind::good_ordinary: return {hensel_unit_root(r.ap, up, prec)};
    case reduction_kind::split_mult:
    case reduction_kind::nonsplit_mult: return {padic::from_integer(up, r.ap)};
    case reduction_kind::good_supersingular: {
      auto a = padic_quad::alpha(up, r.ap);
      return {a, a.conj()};
    }
    default: break;
  }
  throw error(errc::additive_reduction, "no allowable root");
}

/// a_1..a_B (index 0 unused).
inline std::vector<i64> an_expansion(const curve_data& E, i64 B) {
  std::vector<i64> an(static_cast<std::size_t>(B + 1), 0);
  if (B < 1) return an;
  std::vector<i64> spf(static_cast<std::size_t>(B + 1), 0);
  for (i64 i = 2; i <= B; ++i)
    if (spf[i] == 0)
      for (i64 j = i; j <= B; j += i)
        if (spf[j] == 0) spf[j] = i;
  an[1] = 1;
  for (i64 l = 2; l <= B; ++l) {
    if (spf[l] != l) continue;
    const i64 al = local_ap(E, l);
    const bool bad = E.N % l == 0;
    i64 prev2 = 1, prev = al;
    an[l] = al;
    for (i64 q = l * l; q <= B; q *= l) {
      const i64 cur = bad ? prev * al : al * prev - l * prev2;
      an[q] = cur;
      prev2 = prev;
      prev = cur;
      if (q > B / l) break;
    }
  }
  for (i64 n = 2; n <= B; ++n) {
    const i64 l = spf[n];
    i64 m = n, q = 1;
    while (m % l == 0) {
      m /= l;
      q *= l;
    }
    if (m != 1) an[n] = an[q] * an[m];
  }
  return an;
}

// ---------------------------------------------------------------------------
// Periods and L-values

struct period_data {
  real omega_plus;
  real omega_minus_over_i;
  real error_bound;
};

namespace detail {

inline real agm(real a, real b) {
  const real tol = real(10) * std::numeric_limits<real>::epsilon();
  for (int i = 0; i < 200; ++i) {
    real an = (a + b) / 2;
    real bn = sqrt(a * b);
    a = an;
    b = bn;
    if (abs(a - b) <= tol * abs(a)) break;
  }
  return (a + b) / 2;
}

// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6, descending.
inline std::vector<real> two_torsion_roots(const curve_data& E, bool three_real) {
  const double A = E.b2() / 4.0, B = E.b4() / 2.0, C = E.b6() / 4.0;
  const double pp = B - A * A / 3.0, q = 2.0 * A * A * A / 27.0 - A * B / 3.0 + C;
  std::vector<double> approx;
  if (three_real) {
    const double r = 2.0 * std::sqrt(-pp / 3.0);
    double arg = 3.0 * q / (2.0 * pp) * std::sqrt(-3.0 / pp);
    arg = std::max(-1.0, std::min(1.0, arg));
    const double th = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) approx.push_back(r * std::cos(th - 2.0 * M_PI * k / 3.0) - A / 3.0);
  } else {
    const double D = q * q / 4.0 + pp * pp * pp / 27.0;
    const double s = std::sqrt(std::max(D, 0.0));
    approx.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) - A / 3.0);
  }
  const real b2 = E.b2(), b4 = E.b4(), b6 = E.b6();
  std::vector<real> roots;
  for (double x0 : approx) {
    real x = x0;
    for (int i = 0; i < 100; ++i) {
      real f = ((4 * x + b2) * x + 2 * b4) * x + b6;
      real df = (12 * x + 2 * b2) * x + 2 * b4;
      if (df == 0) break;
      real step = f / df;
      x -= step;
      if (abs(step) <= std::numeric_limits<real>::epsilon() * (1 + abs(x))) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end(), std::greater<real>());
  return roots;
}

}  // namespace detail

/// Omega^+ is the integral of |dx/(2y + a1 x + a3)| over E(R); Omega^-/i is
/// the positive imaginary period of the lattice.
inline period_data periods(const curve_data& E, int digits = 30) {
  if (digits > 45) throw error(errc::precision_unreachable, "period precision limited to 45 digits");
  const real pi = boost::math::constants::pi<real>();
  period_data out;
  if (E.discriminant() > 0) {
    auto e = detail::two_torsion_roots(E, true);
    out.omega_plus = 2 * pi / detail::agm(sqrt(e[0] - e[2]), sqrt(e[0] - e[1]));
    out.omega_minus_over_i = pi / detail::agm(sqrt(e[0] - e[2]), sqrt(e[1] - e[2]));
  } else {
    auto e = detail::two_torsion_roots(E, false);
    const real e1 = e[0];
    const real a = 3 * e1 + real(E.b2()) / 4;
    const real b = sqrt(3 * e1 * e1 + real(E.b2()) / 2 * e1 + real(E.b4()) / 2);
    out.omega_plus = 2 * pi / detail::agm(2 * sqrt(b), sqrt(2 * b + a));
    out.omega_minus_over_i = 2 * pi / detail::agm(2 * sqrt(b), sqrt(2 * b - a));
  }
  out.error_bound = pow(real(10), -digits);
  return out;
}

/// Root number of L(E, s) from the theta relation F(1/t) = w t^2 F(t).
inline int root_number_numeric(const curve_data& E) {
  const real pi = boost::math::constants::pi<real>();
  const real sq = sqrt(real(E.N));
  const real t = real(12) / 10;
  const i64 B = static_cast<i64>(40.0 * std::sqrt(static_cast<double>(E.N))) + 50;
  auto an = an_expansion(E, B);
  auto F = [&](const real& y) {
    real s = 0;
    for (i64 n = 1; n <= B; ++n)
      if (an[n]) s += real(an[n]) * exp(-2 * pi * n * y / sq);
    return s;
  };
  const real ratio = F(1 / t) / (t * t * F(t));
  if (abs(ratio - 1) < real(1) / 1000) return 1;
  if (abs(ratio + 1) < real(1) / 1000) return -1;
  throw error(errc::precision_unreachable, "root number could not be determined");
}

/// Kronecker symbol (a / n).
inline int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int r = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) r = -r;
  }
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v > 0) {
    if (a % 2 == 0) return 0;
    const i64 a8 = mod_floor(a, 8);
    if ((v % 2 == 1) && (a8 == 3 || a8 == 5)) r = -r;
  }
  a = mod_floor(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const i64 n8 = n % 8;
      if (n8 == 3 || n8 == 5) r = -r;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) r = -r;
    a %= n;
  }
  return n == 1 ? r : 0;
}

inline bool is_squarefree(i64 n) {
  n = n < 0 ? -n : n;
  for (i64 q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return false;
  return true;
}

inline bool is_fundamental_discriminant(i64 D) {
  if (D == 1) return true;
  if (D == 0) return false;
  if (mod_floor(D, 4) == 1) return is_squarefree(D);
  if (mod_floor(D, 4) != 0) return false;
  const i64 m = D / 4;
  const i64 m4 = mod_floor(m, 4);
  return (m4 == 2 || m4 == 3) && is_squarefree(m);
}

/// L(E, chi_D, 1) from the rapidly convergent series, with the twisted root
/// number w * chi_D(-N).
inline real l_value_numeric(const curve_data& E, i64 D, int digits = 30) {
  if (!is_fundamental_discriminant(D))
    throw error(errc::invalid_argument, "D must be 1 or a fundamental discriminant");
  if (std::gcd(D < 0 ? -D : D, E.N) != 1)
    throw error(errc::invalid_argument, "D must be coprime to the conductor");
  const real pi = boost::math::constants::pi<real>();
  const i64 absD = D < 0 ? -D : D;
  const real c = 2 * pi / (real(absD) * sqrt(real(E.N)));
  const int w = root_number_numeric(E) * (D == 1 ? 1 : kronecker(D, -E.N));
  if (w == -1) return real(0);
  // tail of 2 sum_{n>B} e^{-cn} below 10^-digits
  const real target = pow(real(10), -digits);
  const real denom = 1 - exp(-c);
  i64 B = 1;
  while (2 * exp(-c * (B + 1)) / denom > target) {
    B *= 2;
    if (B > 4000000) throw error(errc::precision_unreachable, "too many terms for requested digits");
  }
  auto an = an_expansion(E, B);
  real s = 0;
  for (i64 n = 1; n <= B; ++n) {
    if (an[n] == 0) continue;
    const int k = D == 1 ? 1 : kronecker(D, n);
    if (k == 0) continue;
    s += real(k * an[n]) / n * exp(-c * n);
  }
  return 2 * s;
}

// ---------------------------------------------------------------------------
// Curve table

inline std::vector<curve_data> builtin_curves() {
  return {
      make_curve("11a1", {0, -1, 1, -10, -20}, 11),
      make_curve("11a2", {0, -1, 1, -7820, -263580}, 11),
      make_curve("11a3", {0, -1, 1, 0, 0}, 11),
      make_curve("14a1", {1, 0, 1, 4, -6}, 14),
      make_curve("15a1", {1, 1, 1, -10, -10}, 15),
      make_curve("19a1", {0, 1, 1, -9, -15}, 19),
      make_curve("27a1", {0, 0, 1, 0, -7}, 27),
      make_curve("37a1", {0, 0, 1, -1, 0}, 37),
      make_curve("37b1", {0, 1, 1, -23, -50}, 37),
  };
}

/// Parses "a1,a2,a3,a4,a6;N".
inline curve_data parse_curve_spec(const std::string& text, const std::string& label = "") {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw error(errc::invalid_argument, "curve spec needs ';N'");
  std::array<i64, 5> a{};
  std::stringstream ss(text.substr(0, semi));
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k >= 5) throw error(errc::invalid_argument, "too many coefficients");
    try {
      a[k++] = std::stoll(item);
    } catch (const std::exception&) {
      throw error(errc::invalid_argument, "bad coefficient '" + item + "'");
    }
  }
  if (k != 5) throw error(errc::invalid_argument, "expected five coefficients");
  i64 N = 0;
  try {
    N = std::stoll(text.substr(semi + 1));
  } catch (const std::exception&) {
    throw error(errc::invalid_argument, "bad conductor");
  }
  return make_curve(label.empty() ? text : label, a, N);
}

/// Reads a table with lines "label a1,a2,a3,a4,a6;N"; '#' starts a comment.
inline std::vector<curve_data> read_curve_table(std::istream& in) {
  std::vector<curve_data> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string label, spec;
    if (!(ls >> label)) continue;
    if (!(ls >> spec)) throw error(errc::invalid_argument, "curve table line without data: " + line);
    out.push_back(parse_curve_spec(spec, label));
  }
  return out;
}

/// Looks up a label in the extra table (if any) and then the built-in list,
/// or parses an explicit "a1,...,a6;N" spec.
inline curve_data find_curve(const std::string& name, const std::string& table_path = "") {
  if (name.find(';') != std::string::npos) return parse_curve_spec(name);
  if (!table_path.empty()) {
    std::ifstream in(table_path);
    if (in)
      for (auto& E : read_curve_table(in))
        if (E.label == name) return E;
  }
  for (auto& E : builtin_curves())
    if (E.label == name) return E;
  throw error(errc::invalid_argument, "unknown curve '" + name + "'");
}

}  // namespace padicell
