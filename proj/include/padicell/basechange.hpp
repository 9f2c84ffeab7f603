#pragma once

// Base change to abelian fields given by groups of tame characters: the
// product L-series, its functional equation and the coefficient relations.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "padicell/verify.hpp"

namespace padicell {

struct abelian_field {
  u64 p = 0;
  std::vector<character> characters;  // sorted, trivial first

  std::size_t degree() const { return characters.size(); }
  bool is_real() const {
    return std::all_of(characters.begin(), characters.end(), [](const character& c) { return c.is_real(); });
  }
  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < characters.size(); ++i) s += (i ? "," : "") + characters[i].str();
    return s + "]";
  }
};

inline constexpr std::size_t max_group_order = 64;

/// Closure of the generators under products. Conductors must be prime to p
/// and to the additive primes of E.
inline abelian_field build_group(const std::vector<character>& gens, u64 p, const curve_data& E) {
  std::vector<i64> additive;
  for (i64 q : prime_factors(E.N))
    if (E.N % (q * q) == 0) additive.push_back(q);
  for (const auto& g : gens) {
    if (g.prime() != p) throw error(errc::invalid_argument, "generator defined for another prime");
    if (g.conductor() % static_cast<i64>(p) == 0)
      throw error(errc::conductor_clash, "generator " + g.str() + " has conductor divisible by p");
    for (i64 q : additive)
      if (g.conductor() % q == 0)
        throw error(errc::conductor_clash, "generator " + g.str() + " is ramified at an additive prime");
  }
  std::set<character> group{character::trivial(p)};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<character> cur(group.begin(), group.end());
    for (const auto& a : cur)
      for (const auto& g : gens) {
        if (group.insert(a * g).second) grew = true;
        if (group.size() > max_group_order) throw error(errc::not_closed, "character group too large");
      }
  }
  for (const auto& a : group) {
    if (!group.count(a.bar())) throw error(errc::not_closed, "group not closed under inverses");
    for (const auto& b : group)
      if (!group.count(a * b)) throw error(errc::not_closed, "group not closed under products");
  }
  abelian_field K;
  K.p = p;
  K.characters.assign(group.begin(), group.end());
  std::stable_partition(K.characters.begin(), K.characters.end(), [](const character& c) { return c.is_trivial(); });
  return K;
}

/// Parses "K=[kron:-4]", "[kron:-4,kron:5]" or "kron:-4,kron:5".
inline abelian_field parse_field(std::string text, u64 p, const curve_data& E) {
  if (text.rfind("K=", 0) == 0) text = text.substr(2);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw error(errc::invalid_argument, "unbalanced brackets in field spec");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<character> gens;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) gens.push_back(parse_character(item, p));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return build_group(gens, p, E);
}

template <class K>
struct basechange_result {
  abelian_field field;
  std::vector<lp_approximation<K>> factors;
  std::vector<measure_context> contexts;
  power_series<K> product;
};

/// Product of the per-character series at level n.
template <class K>
basechange_result<K> lp_basechange(const curve_data& E, const symbol_pair& symbols, u64 p, const K& alpha,
                                   const abelian_field& field, int n, int t_order, unsigned threads = 0) {
  basechange_result<K> out;
  out.field = field;
  for (const auto& psi : field.characters) {
    out.contexts.push_back(make_context(E, symbols, p, padic_root(alpha), psi));
    out.factors.push_back(riemann_series(out.contexts.back(), alpha, n, t_order, threads));
  }
  out.product = out.factors.front().series;
  for (std::size_t i = 1; i < out.factors.size(); ++i) out.product = out.product * out.factors[i].series;
  return out;
}

/// Runs the combined functional equation and, for real groups, the s- and
/// T-variable relations with the sum of log<Q_psi>.
template <class K>
check_report verify_generalisations(const basechange_result<K>& bc, std::size_t kmax = 4) {
  check_report r;
  r.check = "basechange";
  const auto& f0 = bc.factors.front();
  r.inputs = {{"curve", f0.curve}, {"p", std::to_string(f0.p)}, {"K", bc.field.str()},
              {"level", std::to_string(f0.level)}, {"alpha", f0.alpha}};
  const u64 p = f0.p;
  const cyclotomic_generator gen(p);
  padic sign = padic::from_integer(p, 1);
  padic log_sum = padic::zero(p);
  std::size_t m_sum = 0;
  bool orders_certified = true;
  std::string qs;
  for (std::size_t i = 0; i < bc.factors.size(); ++i) {
    const auto d = fe_data_for(bc.contexts[i]);
    sign = sign * padic::from_integer(p, -d.cQ) * d.psibar_mQ;
    log_sum += d.log_angle_Q;
    qs += (i ? "," : "") + std::to_string(d.Q);
    try {
      m_sum += order_vanish(bc.factors[i].series).m;
    } catch (const error&) {
      orders_certified = false;
    }
  }
  r.fact("Q_psi", qs);
  r.fact("log_sum", log_sum.str());
  r.fact("sign", sign.str());

  // (iii) functional equation of the product
  auto fe = verify_fe_T(bc.product, bc.product, sign, log_sum / gen.log_kappa, kmax);
  r.fact("fe", to_string(fe.result));
  for (auto c : fe.per_coefficient) r.per_coefficient.push_back(c);

  // order additivity and the sign
  std::optional<std::size_t> m;
  try {
    m = order_vanish(bc.product).m;
  } catch (const error&) {
  }
  verdict sub = verdict::pass;
  if (m && orders_certified) {
    r.fact("m", std::to_string(*m));
    r.fact("m_sum_factors", std::to_string(m_sum));
    const int sgn = sign.is_zero() ? 0 : (sign.residue(1) == 1 ? 1 : -1);
    r.fact("sign_vs_parity", (sgn == (*m % 2 == 0 ? 1 : -1)) ? "agree" : "disagree");
    if (*m != m_sum || sgn != (*m % 2 == 0 ? 1 : -1)) sub = verdict::fail;
  } else {
    sub = verdict::indeterminate;
  }

  // (i), (ii)
  verdict rel = verdict::pass;
  if (bc.field.is_real()) {
    const auto a = to_s_variable(bc.product, gen.log_kappa);
    auto s_rel = verify_s_relation(a, log_sum, 1, "basechange-s");
    auto t_rel = verify_T_relation(bc.product, log_sum, gen.log_kappa, "basechange-T");
    r.fact("s_relation", to_string(s_rel.result));
    r.fact("T_relation", to_string(t_rel.result));
    for (auto c : s_rel.per_coefficient) r.per_coefficient.push_back(c);
    for (auto c : t_rel.per_coefficient) r.per_coefficient.push_back(c);
    rel = s_rel.result;
    if (t_rel.result == verdict::fail || rel == verdict::fail)
      rel = verdict::fail;
    else if (t_rel.result == verdict::indeterminate)
      rel = verdict::indeterminate;
  } else {
    r.notes.push_back("group is not real: coefficient relations skipped");
  }
  finalize(r);
  merge_verdict(r, sub);
  merge_verdict(r, rel);
  merge_verdict(r, fe.result);
  return r;
}

}  // namespace padicell
