#include <gtest/gtest.h>

#include <map>

#include "padicell/basechange.hpp"

using namespace padicell;

namespace {

struct bundle {
  curve_data E;
  symbol_pair S;
};

const bundle& data_of(const std::string& label) {
  static std::map<std::string, bundle> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(label);
  if (it == cache.end()) {
    auto E = find_curve(label);
    it = cache.emplace(label, bundle{E, build_symbol_pair(E)}).first;
  }
  return it->second;
}

struct run {
  measure_context ctx, ctxb;
  lp_approximation<padic> f, g;
};

run make_run(const std::string& label, u64 p, int n, const std::string& psi = "triv") {
  const auto& B = data_of(label);
  const auto alpha = std::get<padic>(select_root(B.E, p, "unit"));
  const auto ch = parse_character(psi, p);
  run r{make_context(B.E, B.S, p, alpha, ch), make_context(B.E, B.S, p, alpha, ch.bar()), {}, {}};
  r.f = riemann_series(r.ctx, alpha, n, 4);
  r.g = riemann_series(r.ctxb, alpha, n, 4);
  return r;
}

}  // namespace

TEST(Compare, CertificationRules) {
  const auto a = padic::from_integer(5, 26, 4), b = padic::from_integer(5, 1, 6);
  auto c = compare_coefficient(0, a, b);
  EXPECT_EQ(c.joint_units, 4);
  EXPECT_EQ(c.agree_units, 2);
  EXPECT_TRUE(c.certified);
  EXPECT_TRUE(c.mismatch);
  c = compare_coefficient(0, padic::from_integer(5, 1, 3), padic::from_integer(5, 126, 8));
  EXPECT_FALSE(c.mismatch);
  EXPECT_EQ(c.agree_units, 3);
  c = compare_coefficient(0, padic::zero(5, 0), padic::from_integer(5, 3));
  EXPECT_FALSE(c.certified);
  EXPECT_FALSE(c.mismatch);
}

TEST(FunctionalEquation, HoldsForSmallCurves) {
  for (auto [label, p] : std::vector<std::pair<std::string, u64>>{{"11a1", 5}, {"37a1", 5}, {"11a1", 3}}) {
    auto r = make_run(label, p, 5);
    const auto rep = verify_fe(r.ctx, r.f, r.g, 4);
    EXPECT_EQ(rep.result, verdict::pass) << label << " p=" << p;
    EXPECT_EQ(rep.per_coefficient.size(), 5u);
  }
}

TEST(FunctionalEquation, DetectsCorruptedCoefficient) {
  auto r = make_run("11a1", 5, 5);
  auto bad = r.f;
  bad.series[2] += padic::from_integer(5, 1);
  EXPECT_EQ(verify_fe(r.ctx, bad, r.g, 4).result, verdict::fail);
  auto flipped = r.f;
  flipped.series[0] = -flipped.series[0];
  EXPECT_EQ(verify_fe(r.ctx, flipped, r.g, 4).result, verdict::fail);
}

TEST(FunctionalEquation, CrossCharacter) {
  auto r = make_run("11a1", 5, 5, "teich:1");
  EXPECT_EQ(r.g.psi.j(), 3);
  EXPECT_EQ(verify_fe(r.ctx, r.f, r.g, 4).result, verdict::pass);
}

TEST(FunctionalEquation, IdentityWithTrivialData) {
  // sign 1, exponent 0: the right side is f((1+T)^{-1} - 1)
  std::vector<padic> c;
  for (i64 k = 0; k < 6; ++k) c.push_back(padic::from_integer(7, 3 * k + 1));
  const power_series<padic> g(c);
  const auto f = subst_recip(g);
  EXPECT_EQ(verify_fe_T(f, g, padic::from_integer(7, 1), padic::zero(7), 5).result, verdict::pass);
  EXPECT_EQ(verify_fe_T(g, g, padic::from_integer(7, 1), padic::zero(7), 5).result, verdict::fail);
}

TEST(Relations, SyntheticSubLeading) {
  const u64 p = 5;
  const auto L = plog(padic::from_integer(p, 11 * 11 * 11 * 11));  // log<11>
  const auto kappa = cyclotomic_generator(p).log_kappa;
  const padic x = -(L / kappa) / padic::from_integer(p, 2);
  power_series<padic> c({padic::from_integer(p, 1), x});
  EXPECT_EQ(verify_T_relation(c, L, kappa, "t").result, verdict::pass);
  power_series<padic> wrong({padic::from_integer(p, 1), x + padic::from_integer(p, 1)});
  EXPECT_EQ(verify_T_relation(wrong, L, kappa, "t").result, verdict::fail);

  const padic y = -L / padic::from_integer(p, 2);
  power_series<padic> a({padic::from_integer(p, 3), padic::from_integer(p, 3) * y});
  EXPECT_EQ(verify_s_relation(a, L, 1, "s").result, verdict::pass);
}

TEST(Relations, LeadingTerms) {
  for (const std::string label : {"11a1", "37a1"}) {
    auto r = make_run(label, 5, 6);
    const auto s = verify_leading_terms(r.ctx, r.f);
    EXPECT_EQ(s.result, verdict::pass) << label;
    EXPECT_GE(s.min_certified_digits(), 3.0) << label;
    EXPECT_EQ(s.find_fact("m"), std::string(label == "11a1" ? "0" : "1"));
    const auto t = verify_leading_terms_T(r.ctx, r.f);
    EXPECT_EQ(t.result, verdict::pass) << label;
    EXPECT_EQ(t.find_fact("cross_variable"), std::string("agree"));
  }
  auto r = make_run("11a1", 5, 6);
  const auto g = verify_leading_terms(r.ctx, r.f, 3);
  EXPECT_EQ(g.check, "mains-general");
  EXPECT_EQ(g.result, verdict::pass);
  EXPECT_EQ(g.per_coefficient.size(), 2u);
}

TEST(Relations, RequireRealCharacter) {
  auto r = make_run("11a1", 5, 4, "teich:1");
  EXPECT_THROW(verify_leading_terms(r.ctx, r.f), error);
  EXPECT_THROW(verify_parity(r.ctx, r.f), error);
}

TEST(Parity, SignMatchesOrder) {
  struct cas {
    std::string label;
    u64 p;
    int n;
    std::string m;
  };
  for (const auto& c : std::vector<cas>{{"11a1", 5, 5, "0"}, {"37a1", 5, 5, "1"}, {"11a1", 3, 5, "0"}, {"14a1", 7, 4, "1"}}) {
    auto r = make_run(c.label, c.p, c.n);
    const auto rep = verify_parity(r.ctx, r.f);
    EXPECT_EQ(rep.result, verdict::pass) << c.label;
    EXPECT_EQ(rep.find_fact("m"), c.m) << c.label;
    EXPECT_EQ(std::stoi(*rep.find_fact("w_E")), -std::stoi(*rep.find_fact("c_N")));
  }
}

TEST(MuBar, TeichmullerPair) {
  auto r = make_run("11a1", 5, 5, "teich:1");
  const auto rep = verify_mu_bar(r.ctx, r.f, r.g);
  EXPECT_EQ(rep.result, verdict::pass);
  EXPECT_EQ(rep.find_fact("mu_psi"), rep.find_fact("mu_psi_bar"));
}

TEST(MuBar, RejectsSupersingular) {
  const auto& B = data_of("11a1");
  const auto a = std::get<padic_quad>(select_root(B.E, 19, "root1"));
  const auto ctx = make_context(B.E, B.S, 19, a, character::trivial(19));
  const auto f = riemann_series(ctx, a, 2, 1);
  EXPECT_THROW(verify_mu_bar(ctx, f, f), error);
}

TEST(BaseChange, GroupClosure) {
  const auto& B = data_of("11a1");
  const auto K = parse_field("[kron:5,kron:-4]", 3, B.E);
  ASSERT_EQ(K.degree(), 4u);
  EXPECT_TRUE(K.characters.front().is_trivial());
  bool has20 = false;
  for (const auto& c : K.characters) has20 = has20 || c.D() == -20;
  EXPECT_TRUE(has20);
  EXPECT_TRUE(K.is_real());
  EXPECT_EQ(parse_field("K=[kron:-4]", 5, B.E).degree(), 2u);
}

TEST(BaseChange, RejectsBadConductors) {
  const auto& B = data_of("11a1");
  EXPECT_THROW(parse_field("[teich:1]", 5, B.E), error);
  EXPECT_THROW(parse_field("[kron:-3]", 5, find_curve("27a1")), error);
  EXPECT_THROW(parse_field("[kron:-4", 5, B.E), error);
}

TEST(BaseChange, ProductOfFactors) {
  const auto& B = data_of("11a1");
  const auto alpha = std::get<padic>(select_root(B.E, 5, "unit"));
  const auto K = parse_field("K=[kron:-4]", 5, B.E);
  const auto bc = lp_basechange(B.E, B.S, 5, alpha, K, 5, 4);
  ASSERT_EQ(bc.factors.size(), 2u);
  const auto& f = bc.factors[0].series;
  const auto& g = bc.factors[1].series;
  for (std::size_t k = 0; k < bc.product.size(); ++k) {
    padic s = padic::zero(5);
    for (std::size_t i = 0; i <= k; ++i) s += f[i] * g[k - i];
    EXPECT_TRUE((s - bc.product[k]).is_zero()) << k;
  }
  const auto rep = verify_generalisations(bc);
  EXPECT_EQ(rep.result, verdict::pass);
  EXPECT_EQ(rep.find_fact("Q_psi"), std::string("11,11"));
  EXPECT_EQ(rep.find_fact("m"), rep.find_fact("m_sum_factors"));
  EXPECT_EQ(rep.find_fact("sign_vs_parity"), std::string("agree"));
  const auto two_log = padic::from_integer(5, 2) * log_angle(11, 5);
  EXPECT_EQ(rep.find_fact("log_sum"), two_log.str());
}
