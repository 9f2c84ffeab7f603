#pragma once

// Exact rational arithmetic, linear algebra over Q, continued fractions and
// rational reconstruction.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "padicell/error.hpp"

namespace padicell {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

using rational_vector = std::vector<big_rational>;
using sparse_row = std::map<std::size_t, big_rational>;

inline big_int numerator_of(const big_rational& r) {
  return boost::multiprecision::numerator(r);
}
inline big_int denominator_of(const big_rational& r) {
  return boost::multiprecision::denominator(r);
}

inline std::string to_string(const big_rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

/// Parses "a" or "a/b" in decimal.
inline big_rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return big_rational(big_int(s));
  big_int den(s.substr(slash + 1));
  if (den == 0) throw error(errc::invalid_argument, "zero denominator in '" + s + "'");
  return big_rational(big_int(s.substr(0, slash)), den);
}

/// Matrix over Q stored row-wise; zero entries are never stored.
class sparse_matrix {
 public:
  sparse_matrix() = default;
  sparse_matrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}

  static sparse_matrix from_dense(const std::vector<rational_vector>& m) {
    sparse_matrix out(m.size(), m.empty() ? 0 : m.front().size());
    for (std::size_t r = 0; r < m.size(); ++r)
      for (std::size_t c = 0; c < m[r].size(); ++c) out.add(r, c, m[r][c]);
    return out;
  }

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return cols_; }

  /// Accumulates v into entry (r, c).
  void add(std::size_t r, std::size_t c, const big_rational& v) {
    if (r >= data_.size() || c >= cols_)
      throw error(errc::invalid_argument, "sparse_matrix index out of range");
    if (v == 0) return;
    auto [it, inserted] = data_[r].try_emplace(c, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) data_[r].erase(it);
    }
  }

  std::size_t append_row() {
    data_.emplace_back();
    return data_.size() - 1;
  }

  const sparse_row& row(std::size_t r) const { return data_.at(r); }

  big_rational at(std::size_t r, std::size_t c) const {
    auto it = data_.at(r).find(c);
    return it == data_[r].end() ? big_rational(0) : it->second;
  }

  rational_vector multiply(const rational_vector& v) const {
    if (v.size() != cols_) throw error(errc::invalid_argument, "dimension mismatch");
    rational_vector out(rows());
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, x] : data_[r]) out[r] += x * v[c];
    return out;
  }

  std::vector<rational_vector> to_dense() const {
    std::vector<rational_vector> out(rows(), rational_vector(cols_));
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, x] : data_[r]) out[r][c] = x;
    return out;
  }

 private:
  std::size_t cols_ = 0;
  std::vector<sparse_row> data_;
};

/// Result of Gauss-Jordan elimination: row i has a 1 in column pivots[i] and
/// zeros in every other pivot column. Rows are sorted by pivot column.
struct echelon_form {
  std::size_t cols = 0;
  std::vector<std::size_t> pivots;
  std::vector<sparse_row> rows;

  std::size_t rank() const { return pivots.size(); }

  std::vector<std::size_t> free_columns() const {
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cols; ++c)
      if (!is_pivot[c]) out.push_back(c);
    return out;
  }
};

namespace detail {

inline constexpr std::size_t dense_column_limit = 200;

inline void sort_by_pivot(echelon_form& e) {
  std::vector<std::size_t> order(e.pivots.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return e.pivots[a] < e.pivots[b]; });
  echelon_form out;
  out.cols = e.cols;
  for (auto i : order) {
    out.pivots.push_back(e.pivots[i]);
    out.rows.push_back(std::move(e.rows[i]));
  }
  e = std::move(out);
}

// Leftmost-pivot Gauss-Jordan on a dense copy. Produces the reduced row
// echelon form.
inline echelon_form reduce_dense(const sparse_matrix& m) {
  auto a = m.to_dense();
  const std::size_t ncols = m.cols();
  echelon_form e;
  e.cols = ncols;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < ncols && lead < a.size(); ++c) {
    std::size_t sel = lead;
    while (sel < a.size() && a[sel][c] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[lead]);
    const big_rational inv = 1 / a[lead][c];
    for (std::size_t k = c; k < ncols; ++k)
      if (a[lead][k] != 0) a[lead][k] *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == lead || a[r][c] == 0) continue;
      const big_rational f = a[r][c];
      for (std::size_t k = c; k < ncols; ++k)
        if (a[lead][k] != 0) a[r][k] -= f * a[lead][k];
    }
    e.pivots.push_back(c);
    ++lead;
  }
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    sparse_row row;
    for (std::size_t k = 0; k < ncols; ++k)
      if (a[i][k] != 0) row.emplace(k, a[i][k]);
    e.rows.push_back(std::move(row));
  }
  return e;
}

// Sparse Gauss-Jordan choosing each pivot by the Markowitz cost
// (r_i - 1)(c_j - 1). Pivot columns need not be leftmost, so the result is
// an echelon basis of the row space but not necessarily the RREF.
inline echelon_form reduce_markowitz(const sparse_matrix& m) {
  const std::size_t ncols = m.cols();
  std::vector<sparse_row> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!m.row(r).empty()) rows.push_back(m.row(r));
  std::vector<std::set<std::size_t>> col_rows(ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, x] : rows[r]) col_rows[c].insert(r);

  std::vector<bool> done(rows.size(), false);
  echelon_form e;
  e.cols = ncols;
  std::vector<std::size_t> pivot_row_ids;

  while (true) {
    std::size_t best_r = rows.size(), best_c = ncols;
    std::size_t best_cost = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (done[r] || rows[r].empty()) continue;
      const std::size_t rl = rows[r].size() - 1;
      for (const auto& [c, x] : rows[r]) {
        std::size_t live = 0;
        for (auto rr : col_rows[c])
          if (!done[rr]) ++live;
        const std::size_t cost = rl * (live - 1);
        if (cost < best_cost || (cost == best_cost && (c < best_c || (c == best_c && r < best_r)))) {
          best_cost = cost;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r == rows.size()) break;

    auto& prow = rows[best_r];
    const big_rational inv = 1 / prow.at(best_c);
    for (auto& [c, x] : prow) x *= inv;

    std::vector<std::size_t> targets(col_rows[best_c].begin(), col_rows[best_c].end());
    for (auto r : targets) {
      if (r == best_r) continue;
      const big_rational f = rows[r].at(best_c);
      for (const auto& [c, x] : prow) {
        auto [it, inserted] = rows[r].try_emplace(c, big_rational(-f * x));
        if (inserted) {
          col_rows[c].insert(r);
        } else {
          it->second -= f * x;
          if (it->second == 0) {
            rows[r].erase(it);
            col_rows[c].erase(r);
          }
        }
      }
    }
    done[best_r] = true;
    e.pivots.push_back(best_c);
    pivot_row_ids.push_back(best_r);
  }
  for (auto r : pivot_row_ids) e.rows.push_back(rows[r]);
  sort_by_pivot(e);
  return e;
}

}  // namespace detail

/// Gauss-Jordan elimination. Below 200 columns the result is the reduced row
/// echelon form; above it Markowitz pivoting is used and pivots may not be
/// leftmost.
inline echelon_form row_reduce(const sparse_matrix& m) {
  if (m.cols() < detail::dense_column_limit) return detail::reduce_dense(m);
  return detail::reduce_markowitz(m);
}

/// Reduced row echelon form of a list of dense vectors; returns the nonzero
/// rows.
inline std::vector<rational_vector> rref_rows(const std::vector<rational_vector>& vs,
                                              std::size_t cols) {
  sparse_matrix m(vs.size(), cols);
  for (std::size_t r = 0; r < vs.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m.add(r, c, vs[r][c]);
  auto e = detail::reduce_dense(m);
  std::vector<rational_vector> out;
  for (const auto& row : e.rows) {
    rational_vector v(cols);
    for (const auto& [c, x] : row) v[c] = x;
    out.push_back(std::move(v));
  }
  return out;
}

/// Basis of {v : m v = 0} in reduced echelon form (each vector has leading
/// coefficient 1 and zeros in the other vectors' leading positions).
inline std::vector<rational_vector> kernel_basis(const sparse_matrix& m) {
  const auto e = row_reduce(m);
  std::vector<rational_vector> basis;
  for (auto f : e.free_columns()) {
    rational_vector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) {
      auto it = e.rows[i].find(f);
      if (it != e.rows[i].end()) v[e.pivots[i]] = -it->second;
    }
    basis.push_back(std::move(v));
  }
  return rref_rows(basis, m.cols());
}

// ---------------------------------------------------------------------------
// Continued fractions

template <class Int>
struct convergent {
  Int num;
  Int den;
};

/// Convergents p_k/q_k of a/b (b > 0), using floor partial quotients. The
/// implicit predecessor 1/0 is not included.
template <class Int>
std::vector<convergent<Int>> convergents_of(Int a, Int b) {
  if (b == 0) throw error(errc::invalid_argument, "zero denominator");
  if (b < 0) {
    a = -a;
    b = -b;
  }
  std::vector<convergent<Int>> out;
  Int p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    if (r < 0) {
      q -= 1;
      r += b;
    }
    Int p = q * p_prev + p_prev2;
    Int qq = q * q_prev + q_prev2;
    out.push_back({p, qq});
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = qq;
    a = b;
    b = r;
  }
  return out;
}

inline std::vector<big_rational> contfrac_convergents(const big_rational& r) {
  std::vector<big_rational> out;
  for (const auto& c : convergents_of<big_int>(numerator_of(r), denominator_of(r)))
    out.emplace_back(c.num, c.den);
  return out;
}

/// Recovers p/q with q <= den_bound and |x - p/q| <= eps from the continued
/// fraction of x. Requires eps < 1/(2 den_bound^2), which makes the answer
/// unique. Real is any floating type supporting floor and comparison.
template <class Real>
big_rational rational_reconstruct(const Real& x, const Real& eps, const big_int& den_bound) {
  if (den_bound < 1) throw error(errc::invalid_argument, "denominator bound must be positive");
  if (!(eps * 2 * Real(den_bound) * Real(den_bound) < 1))
    throw error(errc::invalid_argument, "eps must be below 1/(2 B^2)");
  using std::floor;
  Real y = x;
  big_int p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  for (int iter = 0; iter < 4096; ++iter) {
    Real fl = floor(y);
    big_int a = static_cast<big_int>(fl);
    big_int p = a * p_prev + p_prev2;
    big_int q = a * q_prev + q_prev2;
    if (q > den_bound) break;
    Real approx = Real(p) / Real(q);
    Real err = x - approx;
    if (err < 0) err = -err;
    if (err <= eps) return big_rational(p, q);
    Real frac = y - fl;
    if (frac == 0) break;
    y = 1 / frac;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
  }
  throw error(errc::no_reconstruction, "no rational with denominator <= " + den_bound.str() +
                                           " within tolerance");
}

}  // namespace padicell
