#pragma once

// Modular symbols for Gamma_0(N) via Manin symbols (c : d) in P^1(Z/N).
// Provides the +/- quotient spaces, Hecke operators, the eigen-functional
// attached to an elliptic curve, its normalisation by twisted L-values, the
// rational symbols [r]^{+/-} and Atkin-Lehner signs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padicell/charset.hpp"
#include "padicell/curve.hpp"
#include "padicell/error.hpp"
#include "padicell/exactla.hpp"

namespace padicell {

inline i64 gcd3(i64 a, i64 b, i64 c) { return std::gcd(std::gcd(a, b), c); }

/// Extended Euclid: returns g and sets x, y with a x + b y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

/// P^1(Z/N): classes of pairs (c, d) mod N with gcd(c, d, N) = 1 modulo
/// unit scaling. The representative of a class is its lexicographically
/// smallest member.
class p1_table {
 public:
  p1_table() = default;
  explicit p1_table(i64 N) : N_(N) {
    if (N < 1) throw error(errc::invalid_argument, "level must be positive");
    std::vector<i64> units;
    for (i64 u = 1; u <= std::max<i64>(N, 1); ++u)
      if (std::gcd(u, N) == 1) units.push_back(u % N);
    idx_.assign(static_cast<std::size_t>(N * N), -1);
    std::vector<std::pair<i64, i64>> canon(static_cast<std::size_t>(N * N), {-1, -1});
    for (i64 c = 0; c < N; ++c)
      for (i64 d = 0; d < N; ++d) {
        if (gcd3(c, d, N) != 1) continue;
        std::pair<i64, i64> best{N, N};
        for (i64 u : units) best = std::min(best, std::make_pair(c * u % N, d * u % N));
        canon[c * N + d] = best;
      }
    std::vector<std::pair<i64, i64>> reps;
    for (const auto& cd : canon)
      if (cd.first >= 0) reps.push_back(cd);
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    elems_ = reps;
    for (i64 k = 0; k < N * N; ++k) {
      if (canon[k].first < 0) continue;
      auto it = std::lower_bound(reps.begin(), reps.end(), canon[k]);
      idx_[k] = static_cast<std::int32_t>(it - reps.begin());
    }
  }

  i64 level() const { return N_; }
  std::size_t size() const { return elems_.size(); }
  const std::pair<i64, i64>& element(std::size_t i) const { return elems_.at(i); }

  std::size_t index(i64 c, i64 d) const {
    c = mod_floor(c, N_);
    d = mod_floor(d, N_);
    const auto k = idx_[static_cast<std::size_t>(c * N_ + d)];
    if (k < 0) throw error(errc::invalid_argument, "pair is not in P^1(Z/N)");
    return static_cast<std::size_t>(k);
  }

  std::pair<i64, i64> normalize(i64 c, i64 d) const { return element(index(c, d)); }

  /// Expected size N prod_{q | N} (1 + 1/q).
  static i64 expected_size(i64 N) {
    i64 s = N;
    for (i64 q : prime_factors(N)) s = s / q * (q + 1);
    return s;
  }

 private:
  i64 N_ = 1;
  std::vector<std::pair<i64, i64>> elems_;
  std::vector<std::int32_t> idx_;
};

inline std::vector<std::pair<i64, i64>> p1_enumerate(i64 N) {
  p1_table t(N);
  std::vector<std::pair<i64, i64>> out;
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(t.element(i));
  return out;
}

struct int_matrix2 {
  i64 a, b, c, d;
};

/// Heilbronn-Merel matrices of determinant l: a > b >= 0, d > c >= 0.
inline std::vector<int_matrix2> merel_matrices(i64 l) {
  std::vector<int_matrix2> out;
  for (i64 a = 1; a <= l; ++a)
    for (i64 d = 1; d <= l; ++d) {
      const i64 bc = a * d - l;
      if (bc < 0) continue;
      for (i64 b = 0; b < a; ++b) {
        if (bc == 0) {
          if (b == 0) {
            for (i64 c = 0; c < d; ++c) out.push_back({a, 0, c, d});
          } else {
            out.push_back({a, b, 0, d});
          }
          continue;
        }
        if (b == 0 || bc % b != 0) continue;
        const i64 c = bc / b;
        if (c < d) out.push_back({a, b, c, d});
      }
    }
  return out;
}

// Manin symbol right actions.
inline std::pair<i64, i64> act(std::pair<i64, i64> x, const int_matrix2& g) {
  return {x.first * g.a + x.second * g.c, x.first * g.b + x.second * g.d};
}
inline std::pair<i64, i64> act_sigma(std::pair<i64, i64> x) { return {x.second, -x.first}; }
inline std::pair<i64, i64> act_tau(std::pair<i64, i64> x) { return {x.second, -x.first - x.second}; }
inline std::pair<i64, i64> act_eta(std::pair<i64, i64> x) { return {-x.first, x.second}; }

/// Lifts (c : d) to a matrix [a b; c' d'] in SL_2(Z) with (c', d') = (c, d) mod N.
inline int_matrix2 lift_to_sl2z(i64 c, i64 d, i64 N) {
  c = mod_floor(c, N);
  d = mod_floor(d, N);
  if (N == 1) return {1, 0, 0, 1};
  if (c == 0) {
    // gcd(d, N) = 1 and (0 : d) lifts to (N, d)
    i64 x, y;
    ext_gcd(N, d, x, y);
    return {y, -x, N, d};
  }
  i64 dd = d;
  while (std::gcd(c, dd) != 1) dd += N;
  i64 x, y;
  ext_gcd(dd, c, x, y);  // x dd + y c = 1
  return {x, -y, c, dd};
}

/// A cusp u/v in lowest terms with v >= 0; infinity is 1/0.
struct cusp {
  i64 u = 1, v = 0;
};

inline cusp make_cusp(i64 u, i64 v) {
  if (v < 0) {
    u = -u;
    v = -v;
  }
  const i64 g = std::gcd(u, v);
  if (g == 0) throw error(errc::invalid_argument, "0/0 is not a cusp");
  u /= g;
  v /= g;
  if (v == 0) u = 1;
  return {u, v};
}

/// Gamma_0(N)-equivalence: s1 v2 = s2 v1 mod gcd(v1 v2, N), s_j u_j = 1 mod v_j.
inline bool cusps_equivalent(const cusp& x, const cusp& y, i64 N) {
  auto s_of = [](const cusp& c) -> i64 {
    if (c.v <= 1) return 1;
    return static_cast<i64>(invmod(static_cast<u64>(mod_floor(c.u, c.v)), static_cast<u64>(c.v)));
  };
  const i64 g = std::gcd(x.v * y.v, N);
  return mod_floor(s_of(x) * y.v - s_of(y) * x.v, g) == 0;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (i64 q : prime_factors(n)) r = r / q * (q - 1);
  return r;
}

inline i64 cusp_count(i64 N) {
  i64 s = 0;
  for (i64 d = 1; d <= N; ++d)
    if (N % d == 0) s += euler_phi(std::gcd(d, N / d));
  return s;
}

/// Cusp classes discovered on demand.
class cusp_classes {
 public:
  explicit cusp_classes(i64 N) : N_(N) {}
  std::size_t classify(const cusp& c) {
    for (std::size_t i = 0; i < reps_.size(); ++i)
      if (cusps_equivalent(reps_[i], c, N_)) return i;
    reps_.push_back(c);
    return reps_.size() - 1;
  }
  std::size_t size() const { return reps_.size(); }
  const cusp& rep(std::size_t i) const { return reps_[i]; }

 private:
  i64 N_;
  std::vector<cusp> reps_;
};

/// Quotient of Q[P^1(Z/N)] by the Manin relations and x - sign * x^*.
struct manin_space {
  i64 N = 1;
  int sign = 1;
  p1_table p1;
  std::vector<std::size_t> basis;       // P^1 indices of the free generators
  std::vector<sparse_row> coords;       // per P^1 index, coordinates on basis positions
  std::vector<rational_vector> cuspidal;  // basis of the cuspidal subspace (basis coordinates)
  std::size_t num_cusps = 0;

  std::size_t dimension() const { return basis.size(); }
  std::size_t cuspidal_dimension() const { return cuspidal.size(); }

  rational_vector coordinates(std::size_t p1_index) const {
    rational_vector v(basis.size());
    for (const auto& [k, x] : coords[p1_index]) v[k] = x;
    return v;
  }
};

/// Relation rows shared by the space and the eigen-functional solver.
inline void append_manin_relations(const p1_table& p1, int sign, sparse_matrix& m) {
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const auto x = p1.element(i);
    auto r = m.append_row();
    m.add(r, i, 1);
    m.add(r, p1.index(act_sigma(x).first, act_sigma(x).second), 1);
    r = m.append_row();
    const auto t1 = act_tau(x), t2 = act_tau(t1);
    m.add(r, i, 1);
    m.add(r, p1.index(t1.first, t1.second), 1);
    m.add(r, p1.index(t2.first, t2.second), 1);
    r = m.append_row();
    const auto e = act_eta(x);
    m.add(r, i, 1);
    m.add(r, p1.index(e.first, e.second), big_rational(-sign));
  }
}

inline manin_space build_space(i64 N, int sign) {
  if (sign != 1 && sign != -1) throw error(errc::invalid_argument, "sign must be +1 or -1");
  manin_space S;
  S.N = N;
  S.sign = sign;
  S.p1 = p1_table(N);
  const std::size_t n = S.p1.size();
  sparse_matrix rel(0, n);
  append_manin_relations(S.p1, sign, rel);
  const auto e = row_reduce(rel);
  S.basis = e.free_columns();
  std::vector<std::size_t> pos(n, n);
  for (std::size_t k = 0; k < S.basis.size(); ++k) pos[S.basis[k]] = k;
  S.coords.assign(n, {});
  for (std::size_t k = 0; k < S.basis.size(); ++k) S.coords[S.basis[k]].emplace(k, 1);
  for (std::size_t i = 0; i < e.rank(); ++i) {
    sparse_row row;
    for (const auto& [c, x] : e.rows[i])
      if (c != e.pivots[i]) row.emplace(pos[c], -x);
    S.coords[e.pivots[i]] = std::move(row);
  }

  // Boundary map into cusp classes modulo c ~ sign * (-c).
  cusp_classes cc(N);
  std::vector<std::pair<std::size_t, std::size_t>> bd(n);  // (class of g inf, class of g 0)
  for (std::size_t i = 0; i < n; ++i) {
    const auto [c, d] = S.p1.element(i);
    const auto g = lift_to_sl2z(c, d, N);
    bd[i] = {cc.classify(make_cusp(g.a, g.c)), cc.classify(make_cusp(g.b, g.d))};
  }
  S.num_cusps = cc.size();
  // star on classes
  std::vector<std::size_t> star(cc.size());
  for (std::size_t k = 0; k < cc.size(); ++k) {
    const auto& r = cc.rep(k);
    star[k] = cc.classify(make_cusp(-r.u, r.v));
  }
  // project class k to (target, coefficient)
  auto project = [&](std::size_t k) -> std::pair<std::size_t, int> {
    const std::size_t s = star[k];
    if (s == k) return {k, sign == 1 ? 1 : 0};
    if (k < s) return {k, 1};
    return {s, sign};
  };
  sparse_matrix B(cc.size(), S.basis.size());
  for (std::size_t k = 0; k < S.basis.size(); ++k) {
    const auto [inf_cls, zero_cls] = bd[S.basis[k]];
    auto [t1, c1] = project(inf_cls);
    auto [t0, c0] = project(zero_cls);
    if (c1) B.add(t1, k, big_rational(c1));
    if (c0) B.add(t0, k, big_rational(-c0));
  }
  S.cuspidal = kernel_basis(B);
  return S;
}

/// Hecke operator T_l on the full quotient (columns are images of basis elements).
inline std::vector<rational_vector> hecke_on_space(const manin_space& S, i64 l) {
  const auto mats = merel_matrices(l);
  const std::size_t d = S.dimension();
  std::vector<rational_vector> cols(d, rational_vector(d));
  for (std::size_t k = 0; k < d; ++k) {
    const auto x = S.p1.element(S.basis[k]);
    for (const auto& h : mats) {
      const auto y = act(x, h);
      if (gcd3(mod_floor(y.first, S.N), mod_floor(y.second, S.N), S.N) != 1) continue;
      for (const auto& [j, v] : S.coords[S.p1.index(y.first, y.second)]) cols[k][j] += v;
    }
  }
  return cols;
}

/// Matrix of T_l on the cuspidal subspace in its echelon basis; entry
/// [i][k] is the coefficient of basis vector i in T_l(v_k).
inline std::vector<rational_vector> hecke_matrix(const manin_space& S, i64 l) {
  if (S.N % l == 0) throw error(errc::bad_prime, "Hecke matrix requested at a prime dividing N");
  const auto T = hecke_on_space(S, l);
  const std::size_t d = S.dimension(), m = S.cuspidal.size();
  std::vector<std::size_t> lead(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t c = 0;
    while (S.cuspidal[i][c] == 0) ++c;
    lead[i] = c;
  }
  std::vector<rational_vector> out(m, rational_vector(m));
  for (std::size_t k = 0; k < m; ++k) {
    rational_vector img(d);
    for (std::size_t j = 0; j < d; ++j)
      if (S.cuspidal[k][j] != 0)
        for (std::size_t i = 0; i < d; ++i) img[i] += T[j][i] * S.cuspidal[k][j];
    for (std::size_t i = 0; i < m; ++i) out[i][k] = img[lead[i]];
    rational_vector check(d);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < d; ++j) check[j] += out[i][k] * S.cuspidal[i][j];
    if (check != img) throw error(errc::inconsistent, "cuspidal subspace is not Hecke stable");
  }
  return out;
}

// ---------------------------------------------------------------------------
// The eigen-functional attached to E

struct eigen_functional {
  i64 N = 1;
  int sign = 1;
  rational_vector values;         // one value per P^1 index
  std::vector<i64> primes_used;   // Hecke primes needed for isolation
};

inline void append_hecke_rows(const p1_table& p1, i64 l, i64 al, sparse_matrix& m) {
  const auto mats = merel_matrices(l);
  const i64 N = p1.level();
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const auto x = p1.element(i);
    auto r = m.append_row();
    for (const auto& h : mats) {
      const auto y = act(x, h);
      if (gcd3(mod_floor(y.first, N), mod_floor(y.second, N), N) != 1) continue;
      m.add(r, p1.index(y.first, y.second), 1);
    }
    m.add(r, i, big_rational(-al));
  }
}

/// Hecke eigen-functional on the sign quotient, isolated by good primes
/// l <= l_max taken in increasing order until the eigenspace is a line.
/// The optional override replaces point-count a_l values.
inline eigen_functional eigen_projection(const curve_data& E, int sign, i64 l_max = 20,
                                         const std::map<i64, i64>& ap_override = {}) {
  const p1_table p1(E.N);
  sparse_matrix m(0, p1.size());
  append_manin_relations(p1, sign, m);
  eigen_functional out;
  out.N = E.N;
  out.sign = sign;
  for (i64 l = 2; l <= l_max; ++l) {
    if (!is_prime(static_cast<u64>(l)) || E.N % l == 0) continue;
    auto it = ap_override.find(l);
    const i64 al = it != ap_override.end() ? it->second : ap_count(E, l);
    append_hecke_rows(p1, l, al, m);
    out.primes_used.push_back(l);
    auto ker = kernel_basis(m);
    if (ker.empty()) throw error(errc::inconsistent, "empty Hecke eigenspace; check N and a_l");
    if (ker.size() == 1) {
      out.values = std::move(ker.front());
      return out;
    }
  }
  throw error(errc::not_isolated, "eigenspace still has dimension > 1 after l_max");
}

/// Checks phi(T_l x) = a_l phi(x) for every Manin symbol x.
inline bool hecke_compatible(const p1_table& p1, const rational_vector& phi, i64 l, i64 al) {
  sparse_matrix m(0, p1.size());
  append_hecke_rows(p1, l, al, m);
  for (const auto& v : m.multiply(phi))
    if (v != 0) return false;
  return true;
}

inline bool satisfies_manin_relations(const p1_table& p1, int sign, const rational_vector& phi) {
  sparse_matrix m(0, p1.size());
  append_manin_relations(p1, sign, m);
  for (const auto& v : m.multiply(phi))
    if (v != 0) return false;
  return true;
}

/// Manin symbols of the path {r, infinity} for r = a/m, with multiplicity
/// -1 each: {inf, r} is the sum of ((-1)^(k-1) q_k : q_(k-1)).
template <class F>
void for_each_path_symbol(i64 a, i64 m, F&& f) {
  const auto conv = convergents_of<i64>(a, m);
  i64 q_prev = 0;
  for (std::size_t k = 0; k < conv.size(); ++k) {
    const i64 qk = conv[k].den;
    const i64 c = (k % 2 == 0) ? -qk : qk;
    f(c, q_prev);
    q_prev = qk;
  }
}

struct normalization_record {
  i64 D = 1;                    // discriminant used
  big_rational target;          // reconstructed L-value ratio
  std::optional<i64> second_D;  // cross-check discriminant
  bool cross_checked = false;
};

class modular_symbol_map {
 public:
  modular_symbol_map() = default;

  /// values: the normalised value per P^1 index.
  modular_symbol_map(i64 N, int sign, rational_vector values, big_rational scale,
                     normalization_record norm = {})
      : N_(N), sign_(sign), p1_(N), values_(std::move(values)), scale_(std::move(scale)),
        norm_(std::move(norm)) {
    if (values_.size() != p1_.size()) throw error(errc::invalid_argument, "value vector has wrong length");
    den_ = 1;
    for (const auto& v : values_) den_ = boost::multiprecision::lcm(den_, denominator_of(v));
    if (den_ > big_int(std::numeric_limits<i64>::max() / 4))
      throw error(errc::out_of_domain, "symbol denominators too large");
    den_i64_ = static_cast<i64>(den_);
    nums_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      big_int n = numerator_of(values_[i]) * (den_ / denominator_of(values_[i]));
      if (boost::multiprecision::abs(n) > big_int(1) << 40)
        throw error(errc::out_of_domain, "symbol numerators too large");
      nums_[i] = static_cast<i64>(n);
    }
  }

  i64 level() const { return N_; }
  int sign() const { return sign_; }
  const p1_table& p1() const { return p1_; }
  const rational_vector& values() const { return values_; }
  const big_rational& scale() const { return scale_; }
  const normalization_record& normalization() const { return norm_; }
  i64 denominator() const { return den_i64_; }

  /// den * [a/m].
  i64 eval_numerator(i64 a, i64 m) const {
    i64 s = 0;
    for_each_path_symbol(a, m, [&](i64 c, i64 d) { s -= nums_[p1_.index(c, d)]; });
    return s;
  }

  big_rational eval(i64 a, i64 m) const { return big_rational(eval_numerator(a, m), den_i64_); }

  big_rational eval(const big_rational& r) const {
    const big_int num = numerator_of(r), den = denominator_of(r);
    if (boost::multiprecision::abs(num) > big_int(1) << 62 || den > big_int(1) << 62) {
      big_rational s = 0;
      const auto conv = convergents_of<big_int>(num, den);
      big_int q_prev = 0;
      for (std::size_t k = 0; k < conv.size(); ++k) {
        const big_int c = (k % 2 == 0) ? big_int(-conv[k].den) : conv[k].den;
        const i64 cm = static_cast<i64>(big_int(c % N_)), dm = static_cast<i64>(big_int(q_prev % N_));
        s -= values_[p1_.index(cm, dm)];
        q_prev = conv[k].den;
      }
      return s;
    }
    return eval(static_cast<i64>(num), static_cast<i64>(den));
  }

  /// Value on the path {x, y} between cusps (v = 0 encodes infinity).
  big_rational path(const cusp& x, const cusp& y) const { return at(x) - at(y); }

 private:
  big_rational at(const cusp& c) const { return c.v == 0 ? big_rational(0) : eval(c.u, c.v); }

  i64 N_ = 1;
  int sign_ = 1;
  p1_table p1_;
  rational_vector values_;
  big_rational scale_ = 1;
  normalization_record norm_;
  big_int den_ = 1;
  i64 den_i64_ = 1;
  std::vector<i64> nums_;
};

/// Unnormalised evaluation of a functional on {r, infinity}.
inline big_rational raw_eval(const p1_table& p1, const rational_vector& phi, i64 a, i64 m) {
  big_rational s = 0;
  for_each_path_symbol(a, m, [&](i64 c, i64 d) { s -= phi[p1.index(c, d)]; });
  return s;
}

/// Fundamental discriminants of the given sign coprime to N, by |D|.
inline std::vector<i64> admissible_discriminants(i64 N, int sign, i64 bound) {
  std::vector<i64> out;
  for (i64 k = 1; k <= bound; ++k) {
    const i64 D = sign * k;
    if (D == -1) continue;
    if (is_fundamental_discriminant(D) && std::gcd(k, N) == 1) out.push_back(D);
  }
  return out;
}

namespace detail {

// Sum of chi_D(a) phi(a/|D|) over a mod |D|.
inline big_rational twisted_sum(const p1_table& p1, const rational_vector& phi, i64 D) {
  const i64 m = D < 0 ? -D : D;
  big_rational s = 0;
  for (i64 a = 0; a < m; ++a) {
    const int k = D == 1 ? 1 : kronecker(D, a);
    if (k == 0) continue;
    s += k * raw_eval(p1, phi, a, m);
  }
  return s;
}

}  // namespace detail

/// Scales the eigen-functional so that
///   sum_a chi_D(a) [a/|D|]^+ =  L(E, chi_D, 1) sqrt(D) / Omega^+        (D > 0)
///   sum_a chi_D(a) [a/|D|]^- = -L(E, chi_D, 1) sqrt(|D|) / (Omega^-/i)  (D < 0)
/// for the smallest admissible D with nonvanishing L-value. A second D is
/// used as an independent check of the scalar.
inline modular_symbol_map normalize_map(const curve_data& E, const eigen_functional& ef,
                                        const period_data& per, i64 search_bound = 200) {
  const p1_table p1(E.N);
  const real om = ef.sign == 1 ? per.omega_plus : per.omega_minus_over_i;
  const real eps = pow(real(10), -25);
  const big_int den_bound = 1000000;
  std::optional<big_rational> scale;
  normalization_record rec;
  for (i64 D : admissible_discriminants(E.N, ef.sign, search_bound)) {
    const real L = l_value_numeric(E, D, 35);
    const big_rational S = detail::twisted_sum(p1, ef.values, D);
    const bool lzero = abs(L) < pow(real(10), -20);
    if (lzero) {
      if (S != 0) throw error(errc::inconsistent, "twisted symbol sum nonzero where L vanishes");
      continue;
    }
    if (S == 0) throw error(errc::inconsistent, "twisted symbol sum vanishes where L does not");
    const real absD = real(D < 0 ? -D : D);
    const real t = (ef.sign == 1 ? 1 : -1) * L * sqrt(absD) / om;
    const big_rational target = rational_reconstruct(t, eps, den_bound);
    const big_rational sc = target / S;
    if (!scale) {
      scale = sc;
      rec.D = D;
      rec.target = target;
    } else {
      if (sc != *scale)
        throw error(errc::no_reconstruction,
                    "normalisations from D = " + std::to_string(rec.D) + " and D = " + std::to_string(D) +
                        " disagree (" + to_string(*scale) + " vs " + to_string(sc) + ")");
      rec.second_D = D;
      rec.cross_checked = true;
      break;
    }
  }
  if (!scale) throw error(errc::no_reconstruction, "no admissible discriminant with nonzero L-value");
  rational_vector vals(ef.values.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = ef.values[i] * *scale;
  return modular_symbol_map(E.N, ef.sign, std::move(vals), *scale, rec);
}

inline modular_symbol_map build_symbol_map(const curve_data& E, int sign, i64 l_max = 20) {
  const auto ef = eigen_projection(E, sign, l_max);
  return normalize_map(E, ef, periods(E, 40));
}

/// Atkin-Lehner eigenvalue c_Q on the eigenline, from
/// phi({W alpha, W beta}) = c_Q phi({alpha, beta}) with W = [Q, y; N, Q w].
inline int atkin_lehner_sign(const modular_symbol_map& map, i64 Q) {
  const i64 N = map.level();
  if (Q < 1 || N % Q != 0 || std::gcd(Q, N / Q) != 1)
    throw error(errc::bad_q, "Q must exactly divide N");
  if (Q == 1) return 1;
  i64 w, y;
  // Q w - (N/Q) y = 1
  ext_gcd(Q, N / Q, w, y);
  y = -y;
  const int_matrix2 W{Q, y, N, Q * w};
  auto apply = [&](const cusp& c) { return make_cusp(W.a * c.u + W.b * c.v, W.c * c.u + W.d * c.v); };
  std::optional<int> found;
  int checks = 0;
  for (i64 m = 1; m <= 60 && checks < 6; ++m)
    for (i64 a = 0; a < m && checks < 6; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const cusp inf{1, 0}, r = make_cusp(a, m);
      const big_rational base = map.path(inf, r);
      if (base == 0) continue;
      const big_rational img = map.path(apply(inf), apply(r));
      const big_rational ratio = img / base;
      if (ratio != 1 && ratio != -1)
        throw error(errc::inconsistent, "Atkin-Lehner ratio " + to_string(ratio) + " is not +-1");
      const int c = ratio == 1 ? 1 : -1;
      if (found && *found != c) throw error(errc::inconsistent, "Atkin-Lehner ratios disagree");
      found = c;
      ++checks;
    }
  if (!found) throw error(errc::inconsistent, "no path with nonzero symbol found");
  return *found;
}

/// Both signs of the normalised symbols of a curve.
struct symbol_pair {
  modular_symbol_map plus;
  modular_symbol_map minus;

  const modular_symbol_map& for_sign(int s) const { return s == 1 ? plus : minus; }
};

inline symbol_pair build_symbol_pair(const curve_data& E, i64 l_max = 20) {
  const auto per = periods(E, 40);
  return {normalize_map(E, eigen_projection(E, 1, l_max), per),
          normalize_map(E, eigen_projection(E, -1, l_max), per)};
}

}  // namespace padicell
