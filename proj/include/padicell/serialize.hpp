#pragma once

// JSON encodings of p-adic values, series approximations and reports.
// Object keys keep insertion order so output is byte-stable.

#include <string>

#include "json.hpp"
#include "padicell/lpbuild.hpp"
#include "padicell/verify.hpp"

namespace padicell {

using json = nlohmann::ordered_json;

inline json precision_json(i64 units) {
  if (units >= infinite_precision / 2) return "exact";
  return units;
}

/// Digits of the unit part (lowest first), valuation and absolute precision.
inline json to_json(const padic& x) {
  json j;
  j["digits"] = json::array();
  if (x.is_exact_zero()) {
    j["valuation"] = nullptr;
    j["precision"] = "exact";
    return j;
  }
  if (x.is_zero()) {
    j["valuation"] = nullptr;
    j["precision"] = x.abs_prec();
    return j;
  }
  for (auto d : x.digits()) j["digits"].push_back(d);
  j["valuation"] = x.valuation();
  j["precision"] = precision_json(x.abs_prec());
  return j;
}

/// c + d*alpha; valuation and precision in half-digits.
inline json to_json(const padic_quad& x) {
  json j;
  j["c"] = to_json(x.c());
  j["d"] = to_json(x.d());
  j["valuation_half"] = x.is_zero() ? json(nullptr) : json(x.valuation_units());
  j["precision_half"] = precision_json(x.precision_units());
  return j;
}

inline json alpha_json(const padic_root& a) {
  json j;
  std::visit(
      [&](const auto& x) {
        j["repr"] = x.str();
        j["precision"] = precision_json(x.precision_units());
      },
      a);
  return j;
}

template <class K>
json to_json(const lp_approximation<K>& a, const padic_root& alpha) {
  json j;
  j["curve"] = a.curve;
  j["p"] = a.p;
  j["alpha"] = alpha_json(alpha);
  j["psi"] = a.psi.str();
  j["kappa_gamma"] = "1+p";
  j["level"] = a.level;
  j["units_per_digit"] = units_of(a.series[0]);
  j["valuation_floor"] = a.valuation_floor_units;
  j["coefficients"] = json::array();
  for (std::size_t k = 0; k < a.series.size(); ++k) {
    json c;
    c["k"] = k;
    c["value"] = to_json(a.series[k]);
    c["prec"] = precision_json(a.series[k].precision_units());
    j["coefficients"].push_back(c);
  }
  return j;
}

template <class K>
json series_json(const power_series<K>& f) {
  json j;
  j["variable"] = f.var;
  j["coefficients"] = json::array();
  for (std::size_t k = 0; k < f.size(); ++k) {
    json c;
    c["k"] = k;
    c["value"] = to_json(f[k]);
    c["prec"] = precision_json(f[k].precision_units());
    j["coefficients"].push_back(c);
  }
  return j;
}

inline json to_json(const check_report& r) {
  json j;
  j["check"] = r.check;
  j["inputs"] = json::object();
  for (const auto& [k, v] : r.inputs) j["inputs"][k] = v;
  j["per_coefficient"] = json::array();
  for (const auto& c : r.per_coefficient) {
    json e;
    e["k"] = c.k;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["agree_digits"] = c.agree_digits();
    e["certified"] = c.certified;
    j["per_coefficient"].push_back(e);
  }
  j["facts"] = json::object();
  for (const auto& [k, v] : r.facts) j["facts"][k] = v;
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["verdict"] = to_string(r.result);
  j["certified_digits"] = r.certified_digits;
  return j;
}

}  // namespace padicell
