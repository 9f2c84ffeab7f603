#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "padicell/lpbuild.hpp"

using namespace padicell;

namespace {

struct curve_fixture {
  curve_data E;
  symbol_pair S;
};

const curve_fixture& fixture(const std::string& label) {
  static std::map<std::string, curve_fixture> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(label);
  if (it == cache.end()) {
    auto E = find_curve(label);
    auto S = build_symbol_pair(E);
    it = cache.emplace(label, curve_fixture{E, std::move(S)}).first;
  }
  return it->second;
}

template <class K>
lp_approximation<K> series_at(const std::string& label, u64 p, int n, const std::string& psi = "triv",
                              int t_order = 4, const std::string& root = "unit") {
  const auto& F = fixture(label);
  const auto alpha = std::get<K>(select_root(F.E, p, root));
  const auto ctx = make_context(F.E, F.S, p, alpha, parse_character(psi, p));
  return riemann_series(ctx, alpha, n, t_order);
}

template <class K>
void expect_close(const K& a, const K& b, i64 units, const std::string& what) {
  const auto d = a - b;
  EXPECT_TRUE(d.is_zero() || d.valuation_units() >= units) << what << ": " << d.str();
}

}  // namespace

TEST(Measure, ValueAtLevelOne) {
  const auto& F = fixture("11a1");
  const auto alpha = std::get<padic>(select_root(F.E, 5, "unit"));
  const auto ctx = make_context(F.E, F.S, 5, alpha, character::trivial(5));
  const auto v = std::get<padic>(measure_value(ctx, 1, 1));
  const auto want = alpha.inverse() * padic::from_rational(5, F.S.plus.eval(1, 5)) -
                    alpha.pow(-2) * padic::from_rational(5, big_rational(1, 5));
  EXPECT_TRUE((v - want).is_zero());
  EXPECT_EQ(F.S.plus.eval(1, 1), big_rational(1, 5));
}

TEST(Measure, SplitMultiplicativeDropsSecondTerm) {
  const auto& F = fixture("14a1");
  const auto alpha = std::get<padic>(select_root(F.E, 7, "unit"));
  EXPECT_TRUE((alpha - padic::from_integer(7, 1)).is_zero());
  const auto ctx = make_context(F.E, F.S, 7, alpha, character::trivial(7));
  EXPECT_EQ(ctx.delta(), 1);
  for (i64 a : {1, 2, 3, 10, 48})
    for (int k : {1, 2}) {
      const auto v = std::get<padic>(measure_value(ctx, a, k));
      EXPECT_TRUE((v - padic::from_rational(7, F.S.plus.eval(a, static_cast<i64>(ipow(7, k))))).is_zero());
    }
}

TEST(Measure, DistributionLawExact) {
  std::mt19937_64 rng(31);
  struct cas {
    std::string label;
    i64 p, M;
  };
  int count = 0;
  for (const cas& c : std::vector<cas>{{"11a1", 5, 1}, {"37a1", 5, 1}, {"11a1", 3, 4}, {"14a1", 7, 1}, {"11a1", 19, 1}}) {
    const auto& F = fixture(c.label);
    const bool bad = F.E.N % c.p == 0;
    const i64 ap = bad ? reduction_type(F.E, c.p).ap : oracle::trace(F.E.a, c.p);
    for (int t = 0; t < 20; ++t) {
      const int k = 1 + static_cast<int>(rng() % 3);
      const i64 pk = static_cast<i64>(ipow(static_cast<u64>(c.p), k));
      i64 a;
      do a = static_cast<i64>(rng() % static_cast<u64>(c.M * pk));
      while (std::gcd(a, c.p * c.M) != 1);
      for (int sign : {1, -1}) {
        const auto& m = F.S.for_sign(sign);
        big_rational lhs = 0;
        for (i64 b = 0; b < c.p; ++b) lhs += m.eval(a + b * c.M * pk, c.M * pk * c.p);
        big_rational rhs = ap * m.eval(a, c.M * pk);
        if (!bad) rhs -= m.eval(a, c.M * pk / c.p);
        EXPECT_EQ(lhs, rhs) << c.label << " p=" << c.p << " a=" << a << " k=" << k;
        ++count;
      }
    }
  }
  EXPECT_EQ(count, 200);
}

TEST(Measure, RefinementSumsVanish) {
  std::mt19937_64 rng(32);
  const auto& F = fixture("11a1");
  for (const std::string psi : {"triv", "kron:-4", "teich:1"}) {
    const auto alpha = std::get<padic>(select_root(F.E, 5, "unit"));
    const auto ctx = make_context(F.E, F.S, 5, alpha, parse_character(psi, 5));
    for (int t = 0; t < 20; ++t) {
      const int k = 1 + static_cast<int>(rng() % 3);
      const i64 mod = ctx.M * static_cast<i64>(ipow(5, k));
      i64 a;
      do a = static_cast<i64>(rng() % static_cast<u64>(mod));
      while (std::gcd(a, 5 * ctx.M) != 1);
      padic s = padic::zero(5);
      for (i64 b = 0; b < 5; ++b) s += std::get<padic>(measure_value(ctx, a + b * mod, k + 1));
      EXPECT_TRUE((s - std::get<padic>(measure_value(ctx, a, k))).is_zero()) << psi << " a=" << a;
    }
  }
  // supersingular: the same identity in Q_p(alpha)
  const auto beta = std::get<padic_quad>(select_root(F.E, 19, "root1"));
  const auto ctx = make_context(F.E, F.S, 19, beta, character::trivial(19));
  for (i64 a : {1, 2, 18, 20, 77}) {
    if (a % 19 == 0) continue;
    auto s = beta.like(0);
    for (i64 b = 0; b < 19; ++b) s += std::get<padic_quad>(measure_value(ctx, a + b * 19, 2));
    EXPECT_TRUE((s - std::get<padic_quad>(measure_value(ctx, a, 1))).is_zero());
  }
}

TEST(LSeries, InterpolationAnchor) {
  const auto f = series_at<padic>("11a1", 5, 4);
  const auto alpha = std::get<padic>(select_root(fixture("11a1").E, 5, "unit"));
  const auto one = padic::from_integer(5, 1);
  const auto want = (one - alpha.inverse()).pow(2) * padic::from_rational(5, big_rational(1, 5));
  const auto d = f.series[0] - want;
  EXPECT_GE(f.series[0].precision_units(), 3);
  EXPECT_TRUE(d.is_zero());
  EXPECT_GE(d.valuation(), 3);
}

TEST(LSeries, RankOneCurveVanishes) {
  const auto f = series_at<padic>("37a1", 5, 4);
  EXPECT_FALSE(certified_nonzero(f.series[0]));
  EXPECT_GE(f.series[0].precision_units(), 4);
  EXPECT_TRUE(certified_nonzero(f.series[1]));
  EXPECT_EQ(f.series[1].valuation(), 0);
  EXPECT_EQ(order_vanish(f.series).m, 1u);
}

TEST(LSeries, EvenTeichmullerTwist) {
  const auto f = series_at<padic>("11a1", 5, 4, "teich:2");
  bool nonzero = false;
  for (const auto& c : f.series.coeffs) nonzero = nonzero || certified_nonzero(c);
  EXPECT_TRUE(nonzero);
}

TEST(LSeries, DualLevelStability) {
  struct cas {
    std::string label, psi;
    u64 p;
    int ref;
  };
  for (const cas& c : std::vector<cas>{{"11a1", "triv", 5, 7}, {"37a1", "triv", 5, 7}, {"11a1", "triv", 3, 9},
                                       {"11a1", "kron:-4", 5, 6}, {"14a1", "triv", 7, 5}}) {
    const auto ref = series_at<padic>(c.label, c.p, c.ref, c.psi);
    for (int n : {2, 3, 4}) {
      const auto f = series_at<padic>(c.label, c.p, n, c.psi, std::min<int>(4, static_cast<int>(ipow(c.p, n - 1)) - 1));
      for (std::size_t j = 0; j < f.series.size(); ++j) {
        const i64 prec = f.series[j].precision_units();
        if (prec <= 0) continue;
        expect_close(f.series[j], ref.series[j], prec, c.label + " n=" + std::to_string(n) + " j=" + std::to_string(j));
      }
    }
  }
}

TEST(LSeries, ReportedPrecisionNeverExceedsApriori) {
  const auto f = series_at<padic>("11a1", 5, 5);
  for (std::size_t j = 1; j < f.series.size(); ++j) EXPECT_LE(f.series[j].precision_units(), f.apriori_units[j]);
}

TEST(LSeries, SupersingularValuations) {
  for (const std::string root : {"root1", "root2"}) {
    const auto f = series_at<padic_quad>("11a1", 19, 2, "triv", 1, root);
    ASSERT_EQ(f.series.size(), 2u);
    EXPECT_GE(f.valuation_floor_units, -4);
    for (const auto& c : f.series.coeffs)
      if (certified_nonzero(c)) {
        EXPECT_GE(c.valuation_units(), -2);
        EXPECT_GE(c.valuation_units(), f.valuation_floor_units);
      }
    EXPECT_TRUE(certified_nonzero(f.series[0]));
  }
}

TEST(LSeries, ThreadCountDoesNotChangeResult) {
  const auto& F = fixture("11a1");
  const auto alpha = std::get<padic>(select_root(F.E, 5, "unit"));
  const auto ctx = make_context(F.E, F.S, 5, alpha, character::trivial(5));
  const auto a = riemann_sum(ctx, alpha, 7, 4, 1);
  const auto b = riemann_sum(ctx, alpha, 7, 4, 4);
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_EQ(a[j].str(), b[j].str());
  }
}

TEST(LSeries, TaylorConstantTerm) {
  const auto f = series_at<padic>("11a1", 5, 5);
  const auto a = taylor_at_1(f);
  EXPECT_EQ(a.var, "s-1");
  EXPECT_TRUE((a[0] - f.series[0]).is_zero());
}

TEST(LSeries, InputErrors) {
  const auto& F = fixture("11a1");
  const auto alpha = std::get<padic>(select_root(F.E, 5, "unit"));
  const auto ctx = make_context(F.E, F.S, 5, alpha, character::trivial(5));
  EXPECT_THROW(riemann_sum(ctx, alpha, 1, 1), error);
  EXPECT_THROW(riemann_sum(ctx, alpha, 2, 5), error);
  EXPECT_THROW(make_context(F.E, F.S, 5, alpha, parse_character("kron:-11", 5)), error);
  EXPECT_THROW(make_context(F.E, F.S, 19, padic::from_integer(19, 1), character::trivial(19)), error);
  EXPECT_THROW(select_root(F.E, 19, "unit"), error);
  const auto E27 = find_curve("27a1");
  EXPECT_THROW(select_root(E27, 3, "unit"), error);
}
