#pragma once

// Tame Dirichlet characters psi = chi_D * omega^j with values in Z_p.

#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "padicell/curve.hpp"
#include "padicell/padic.hpp"

namespace padicell {

class character {
 public:
  character() = default;
  character(i64 D, i64 j, u64 p) : D_(D), p_(p) {
    if (p < 3 || !is_prime(p)) throw error(errc::invalid_argument, "p must be an odd prime");
    if (!is_fundamental_discriminant(D))
      throw error(errc::invalid_argument, std::to_string(D) + " is not a fundamental discriminant");
    if (D % static_cast<i64>(p) == 0)
      throw error(errc::wild_character, "quadratic part has conductor divisible by p");
    j_ = static_cast<int>(mod_floor(j, static_cast<i64>(p - 1)));
  }

  static character trivial(u64 p) { return character(1, 0, p); }

  i64 D() const { return D_; }
  int j() const { return j_; }
  u64 prime() const { return p_; }
  /// Prime-to-p part of the conductor.
  i64 M() const { return D_ < 0 ? -D_ : D_; }
  i64 conductor() const { return M() * (j_ != 0 ? static_cast<i64>(p_) : 1); }
  bool is_trivial() const { return D_ == 1 && j_ == 0; }
  bool is_real() const { return j_ == 0 || 2 * j_ == static_cast<int>(p_ - 1); }
  int order() const {
    const int tj = static_cast<int>(p_ - 1) / std::gcd(j_, static_cast<int>(p_ - 1));
    const int tq = D_ == 1 ? 1 : 2;
    return std::lcm(tj, tq);
  }

  int sign() const { return (D_ < 0 ? -1 : 1) * (j_ % 2 == 0 ? 1 : -1); }

  character bar() const { return character(D_, -j_, p_); }

  /// The quadratic factor chi_D(x) in {-1, 0, 1}.
  int quadratic(i64 x) const { return D_ == 1 ? 1 : kronecker(D_, x); }

  padic eval(i64 x, int prec) const {
    if (j_ != 0 && x % static_cast<i64>(p_) == 0) return padic::zero(p_);
    const int q = quadratic(x);
    if (q == 0) return padic::zero(p_);
    padic v = padic::from_integer(p_, q);
    if (j_ != 0) v *= teichmuller(x, p_, prec).pow(j_);
    return v;
  }

  std::string str() const {
    if (is_trivial()) return "triv";
    std::string s;
    if (D_ != 1) s = "kron:" + std::to_string(D_);
    if (j_ != 0) s += (s.empty() ? "" : "*") + std::string("teich:") + std::to_string(j_);
    return s;
  }

  friend bool operator==(const character& a, const character& b) {
    return a.D_ == b.D_ && a.j_ == b.j_ && a.p_ == b.p_;
  }
  friend bool operator<(const character& a, const character& b) {
    return std::tie(a.D_, a.j_) < std::tie(b.D_, b.j_);
  }

  friend character operator*(const character& a, const character& b) {
    if (a.p_ != b.p_) throw error(errc::invalid_argument, "characters for different primes");
    return character(quadratic_product(a.D_, b.D_), a.j_ + b.j_, a.p_);
  }

 private:
  // Fundamental discriminant of Q(sqrt(D1 D2)).
  static i64 quadratic_product(i64 D1, i64 D2) {
    i64 n = D1 * D2;
    i64 sign = n < 0 ? -1 : 1;
    n = n < 0 ? -n : n;
    i64 core = 1;
    for (i64 q = 2; q * q <= n; ++q) {
      int e = 0;
      while (n % q == 0) {
        n /= q;
        ++e;
      }
      if (e % 2) core *= q;
    }
    core *= n;
    core *= sign;
    if (core == 1) return 1;
    return mod_floor(core, 4) == 1 ? core : 4 * core;
  }

  i64 D_ = 1;
  int j_ = 0;
  u64 p_ = 0;
};

/// Parses "triv", "kron:D", "teich:j" or "kron:D*teich:j".
inline character parse_character(const std::string& text, u64 p) {
  if (text == "triv" || text.empty()) return character::trivial(p);
  i64 D = 1, j = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto star = text.find('*', start);
    std::string part = text.substr(start, star == std::string::npos ? std::string::npos : star - start);
    auto colon = part.find(':');
    if (colon == std::string::npos) throw error(errc::invalid_argument, "bad character syntax '" + text + "'");
    const std::string key = part.substr(0, colon);
    i64 val = 0;
    try {
      val = std::stoll(part.substr(colon + 1));
    } catch (const std::exception&) {
      throw error(errc::invalid_argument, "bad character syntax '" + text + "'");
    }
    if (key == "kron")
      D = val;
    else if (key == "teich")
      j = val;
    else
      throw error(errc::invalid_argument, "unknown character component '" + key + "'");
    if (star == std::string::npos) break;
    start = star + 1;
  }
  return character(D, j, p);
}

}  // namespace padicell
