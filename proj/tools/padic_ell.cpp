// padic-ell: command-line front end.

#include <algorithm>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "padicell/padicell.hpp"

using namespace padicell;

namespace {

enum exit_code : int { ok = 0, input_error = 1, indeterminate = 2, failed = 3 };

struct options {
  std::vector<std::string> curves{"11a1"};
  u64 p = 5;
  std::vector<std::string> psis{"triv"};
  std::string alpha = "unit";
  int level = 4;
  int t_order = 4;
  int k_max = 3;
  std::string field;
  std::string format = "json";
  std::string out;
  std::string curves_file;
  std::string cache_dir;
  unsigned jobs = 1;
};

struct job_result {
  json doc;
  int code = ok;
  std::string diagnostic;
};

std::string default_curves_file() {
#ifdef PADICELL_DATA_DIR
  const std::filesystem::path p = std::filesystem::path(PADICELL_DATA_DIR) / "curves.txt";
  if (std::filesystem::exists(p)) return p.string();
#endif
  return "";
}

int code_for(const error& e) {
  switch (e.code()) {
    case errc::indeterminate:
    case errc::precision_exhausted: return indeterminate;
    default: return input_error;
  }
}

int code_for(verdict v) {
  switch (v) {
    case verdict::pass: return ok;
    case verdict::fail: return failed;
    default: return indeterminate;
  }
}

int combine(int a, int b) {
  auto rank = [](int c) { return c == input_error ? 3 : c == failed ? 2 : c == indeterminate ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

class session {
 public:
  explicit session(const options& o) : opt_(o) {}

  curve_data curve(const std::string& name) const {
    return find_curve(name, opt_.curves_file.empty() ? default_curves_file() : opt_.curves_file);
  }

  symbol_pair symbols(const curve_data& E) const {
    std::string dir = opt_.cache_dir;
    if (dir.empty())
      if (const char* env = std::getenv("PADIC_ELL_CACHE"); env && *env) dir = env;
    if (dir.empty()) return build_symbol_pair(E);
    return cached_symbols(E, dir);
  }

  unsigned inner_threads() const {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return std::max(1u, hw / std::max(1u, opt_.jobs));
  }

  const options& opt() const { return opt_; }

 private:
  options opt_;
};

void check_prime(u64 p) {
  if (p == 2) throw error(errc::invalid_argument, "p must be odd");
  if (p < 3 || !is_prime(p)) throw error(errc::invalid_argument, "p must be an odd prime");
}

std::string strip_code(const std::string& what) {
  const auto colon = what.find(": ");
  return colon == std::string::npos ? what : what.substr(colon + 2);
}

template <class F>
job_result guarded(F&& f) {
  try {
    return f();
  } catch (const error& e) {
    job_result r;
    r.code = code_for(e);
    r.diagnostic = e.what();
    r.doc = json{{"error", to_string(e.code())}, {"message", strip_code(e.what())}};
    return r;
  } catch (const std::exception& e) {
    job_result r;
    r.code = input_error;
    r.diagnostic = e.what();
    r.doc = json{{"error", "InvalidArgument"}, {"message", e.what()}};
    return r;
  }
}

struct job {
  std::string curve;
  std::string psi;
};

std::vector<job> expand_jobs(const options& o) {
  std::vector<job> out;
  for (const auto& c : o.curves)
    for (const auto& s : o.psis) out.push_back({c, s});
  return out;
}

template <class F>
int run_jobs(const session& S, F&& body) {
  const auto jobs = expand_jobs(S.opt());
  std::vector<job_result> results(jobs.size());
  if (S.opt().jobs <= 1 || jobs.size() == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = guarded([&] { return body(jobs[i]); });
  } else {
    std::size_t next = 0;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(S.opt().jobs, jobs.size()); ++t)
      pool.emplace_back([&] {
        while (true) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lk(mu);
            if (next >= jobs.size()) return;
            i = next++;
          }
          results[i] = guarded([&] { return body(jobs[i]); });
        }
      });
    for (auto& th : pool) th.join();
  }
  int code = ok;
  json all = json::array();
  for (auto& r : results) {
    code = combine(code, r.code);
    if (!r.diagnostic.empty()) std::cerr << "padic-ell: " << r.diagnostic << "\n";
    all.push_back(r.doc);
  }
  const json doc = results.size() == 1 ? results[0].doc : all;
  std::ostringstream text;
  const auto& fmt = S.opt().format;
  if (fmt == "json") {
    text << doc.dump(2) << "\n";
  } else {
    auto render = [&](const json& d) {
      if (d.contains("coefficients")) {
        if (fmt == "csv") text << "k,value,prec\n";
        for (const auto& c : d["coefficients"]) {
          if (fmt == "csv")
            text << c["k"] << "," << c["text"].get<std::string>() << "," << c["prec"] << "\n";
          else
            text << "  T^" << c["k"] << ": " << c["text"].get<std::string>() << "   (prec " << c["prec"] << ")\n";
        }
      } else if (d.contains("verdict")) {
        if (fmt == "csv") {
          text << "check,k,agree_digits,certified,verdict\n";
          for (const auto& c : d["per_coefficient"])
            text << d["check"].get<std::string>() << "," << c["k"] << "," << c["agree_digits"] << ","
                 << c["certified"] << "," << d["verdict"].get<std::string>() << "\n";
        } else {
          text << d["check"].get<std::string>() << ": " << d["verdict"].get<std::string>() << " (certified digits "
               << d["certified_digits"] << ")\n";
          for (const auto& c : d["per_coefficient"])
            text << "  k=" << c["k"] << " agree " << c["agree_digits"] << (c["certified"].get<bool>() ? "" : " (uncertified)")
                 << "\n";
          for (const auto& it : d["facts"].items()) text << "  " << it.key() << " = " << it.value().template get<std::string>() << "\n";
        }
      } else {
        text << d.dump() << "\n";
      }
    };
    if (doc.is_array())
      for (const auto& d : doc) render(d);
    else
      render(doc);
  }
  if (S.opt().out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(S.opt().out);
    if (!f) {
      std::cerr << "padic-ell: cannot write " << S.opt().out << "\n";
      return input_error;
    }
    f << text.str();
  }
  return code;
}

/// Adds a plain-text rendering next to each coefficient.
template <class K>
json with_text(json j, const power_series<K>& f) {
  for (std::size_t k = 0; k < f.size(); ++k) j["coefficients"][k]["text"] = f[k].str();
  return j;
}

int cmd_series(const session& S, bool taylor) {
  return run_jobs(S, [&](const job& jb) {
    const auto& o = S.opt();
    check_prime(o.p);
    const auto E = S.curve(jb.curve);
    const auto psi = parse_character(jb.psi, o.p);
    const auto alpha = select_root(E, o.p, o.alpha);
    const auto syms = S.symbols(E);
    const auto res = lp_series(E, syms, o.p, alpha, psi, o.level, o.t_order, S.inner_threads());
    job_result r;
    std::visit(
        [&](const auto& a) {
          if (!taylor) {
            r.doc = with_text(to_json(a, alpha), a.series);
          } else {
            const auto s = taylor_at_1(a);
            json j;
            j["curve"] = a.curve;
            j["p"] = a.p;
            j["alpha"] = alpha_json(alpha);
            j["psi"] = a.psi.str();
            j["kappa_gamma"] = "1+p";
            j["level"] = a.level;
            const auto sj = series_json(s);
            j["variable"] = sj["variable"];
            j["coefficients"] = sj["coefficients"];
            r.doc = with_text(j, s);
          }
        },
        res);
    return r;
  });
}

template <class K>
check_report run_check(const std::string& check, const session& S, const curve_data& E, const symbol_pair& syms,
                       const K& alpha, const character& psi) {
  const auto& o = S.opt();
  const auto ctx = make_context(E, syms, o.p, padic_root(alpha), psi);
  const auto f = riemann_series(ctx, alpha, o.level, o.t_order, S.inner_threads());
  if (check == "fe" || check == "mu-bar") {
    const auto ctxb = make_context(E, syms, o.p, padic_root(alpha), psi.bar());
    const auto g = psi.bar() == psi ? f : riemann_series(ctxb, alpha, o.level, o.t_order, S.inner_threads());
    if (check == "fe") return verify_fe(ctx, f, g, static_cast<std::size_t>(o.t_order));
    return verify_mu_bar(ctx, f, g);
  }
  if (check == "mains") return verify_leading_terms(ctx, f, 1);
  if (check == "mains-general") return verify_leading_terms(ctx, f, o.k_max);
  if (check == "main-T") return verify_leading_terms_T(ctx, f);
  if (check == "parity") return verify_parity(ctx, f);
  throw error(errc::invalid_argument, "unknown check '" + check + "'");
}

const std::vector<std::string> check_names{"fe", "mains", "mains-general", "main-T", "mu-bar", "parity", "basechange"};

int cmd_verify(const session& S, const std::string& check) {
  if (std::find(check_names.begin(), check_names.end(), check) == check_names.end()) {
    std::cerr << "padic-ell: unknown check '" << check << "'\n";
    return input_error;
  }
  return run_jobs(S, [&](const job& jb) {
    const auto& o = S.opt();
    check_prime(o.p);
    const auto E = S.curve(jb.curve);
    const auto alpha = select_root(E, o.p, o.alpha);
    const auto syms = S.symbols(E);
    job_result r;
    check_report rep;
    if (check == "basechange") {
      if (o.field.empty()) throw error(errc::invalid_argument, "basechange needs --field");
      const auto K = parse_field(o.field, o.p, E);
      rep = std::visit(
          [&](const auto& al) {
            return verify_generalisations(lp_basechange(E, syms, o.p, al, K, o.level, o.t_order, S.inner_threads()),
                                          static_cast<std::size_t>(o.t_order));
          },
          alpha);
    } else {
      const auto psi = parse_character(jb.psi, o.p);
      rep = std::visit([&](const auto& al) { return run_check(check, S, E, syms, al, psi); }, alpha);
    }
    r.doc = to_json(rep);
    r.code = code_for(rep.result);
    return r;
  });
}

int cmd_basechange(const session& S) {
  return run_jobs(S, [&](const job& jb) {
    const auto& o = S.opt();
    check_prime(o.p);
    if (o.field.empty()) throw error(errc::invalid_argument, "basechange needs --field");
    const auto E = S.curve(jb.curve);
    const auto alpha = select_root(E, o.p, o.alpha);
    const auto syms = S.symbols(E);
    const auto K = parse_field(o.field, o.p, E);
    job_result r;
    std::visit(
        [&](const auto& al) {
          const auto bc = lp_basechange(E, syms, o.p, al, K, o.level, o.t_order, S.inner_threads());
          json j;
          j["curve"] = E.label;
          j["p"] = o.p;
          j["alpha"] = alpha_json(alpha);
          j["K"] = K.str();
          j["kappa_gamma"] = "1+p";
          j["level"] = o.level;
          j["factors"] = json::array();
          for (const auto& f : bc.factors) j["factors"].push_back(with_text(to_json(f, alpha), f.series));
          const auto sj = series_json(bc.product);
          j["coefficients"] = sj["coefficients"];
          r.doc = with_text(j, bc.product);
        },
        alpha);
    return r;
  });
}

int cmd_cache(const session& S, const std::string& action) {
  const auto& o = S.opt();
  const std::filesystem::path dir = o.cache_dir.empty() ? cache_directory() : std::filesystem::path(o.cache_dir);
  int code = ok;
  for (const auto& name : o.curves) {
    try {
      const auto E = S.curve(name);
      if (action == "build") {
        const auto s = build_symbol_pair(E);
        store_symbols(E, s, dir);
        std::cout << E.label << ": stored " << cache_file(E, dir).string() << "\n";
      } else if (action == "load" || action == "check") {
        bool hit = false;
        std::optional<symbol_pair> s;
        if (action == "load") {
          s = cached_symbols(E, dir, &hit);
        } else {
          s = load_symbols(E, dir);
          hit = s.has_value();
          if (!hit) throw error(errc::invalid_argument, "no cache entry for " + E.label);
        }
        std::cout << E.label << ": " << (hit ? "hit" : "miss (built)") << ", [0]+ = " << to_string(s->plus.eval(0, 1))
                  << "\n";
      } else {
        throw error(errc::invalid_argument, "cache action must be build, load or check");
      }
    } catch (const error& e) {
      std::cerr << "padic-ell: " << e.what() << "\n";
      code = combine(code, input_error);
    }
  }
  return code;
}

int cmd_curves_list(const session& S) {
  std::vector<curve_data> all = builtin_curves();
  const std::string file = S.opt().curves_file.empty() ? default_curves_file() : S.opt().curves_file;
  if (!file.empty()) {
    std::ifstream in(file);
    if (in)
      for (auto& E : read_curve_table(in))
        if (std::none_of(all.begin(), all.end(), [&](const curve_data& c) { return c.label == E.label; }))
          all.push_back(E);
  }
  for (const auto& E : all) std::cout << E.label << "  " << E.coefficients_text() << "  N=" << E.N << "\n";
  return ok;
}

void add_common(CLI::App* c, options& o, bool with_psi = true) {
  c->add_option("--curve", o.curves, "curve label or \"a1,a2,a3,a4,a6;N\" (repeatable)");
  c->add_option("--p", o.p, "odd prime");
  if (with_psi) c->add_option("--psi", o.psis, "character: triv, kron:D, teich:j, kron:D*teich:j (repeatable)");
  c->add_option("--alpha", o.alpha, "root selector: unit, root1, root2");
  c->add_option("--level", o.level, "Riemann-sum level n");
  c->add_option("--t-order", o.t_order, "highest power of T");
  c->add_option("--format", o.format, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
  c->add_option("--out", o.out, "output file");
  c->add_option("--jobs", o.jobs, "parallel (curve, psi) jobs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic L-functions of elliptic curves from modular symbols"};
  app.require_subcommand(1);
  options o;
  app.add_option("--curves-file", o.curves_file, "extra curve table");
  app.add_option("--cache-dir", o.cache_dir, "symbol cache directory (default: $PADIC_ELL_CACHE)");

  auto* series = app.add_subcommand("series", "power series in T");
  add_common(series, o);
  auto* taylor = app.add_subcommand("taylor", "Taylor expansion at s = 1");
  add_common(taylor, o);

  std::string check;
  auto* verify = app.add_subcommand("verify", "run a checker");
  verify->add_option("check", check, "fe, mains, mains-general, main-T, mu-bar, parity, basechange")->required();
  add_common(verify, o);
  verify->add_option("--field", o.field, "abelian field, e.g. K=[kron:-4]");
  verify->add_option("--k-max", o.k_max, "largest odd k for mains-general");

  auto* bc = app.add_subcommand("basechange", "product series over an abelian field");
  add_common(bc, o, false);
  bc->add_option("--field", o.field, "abelian field, e.g. K=[kron:-4]")->required();

  std::string action;
  auto* cache = app.add_subcommand("cache", "manage the modular-symbol cache");
  cache->add_option("action", action, "build, load or check")->required();
  cache->add_option("--curve", o.curves, "curve label (repeatable)");

  auto* curves = app.add_subcommand("curves", "curve table");
  auto* list = curves->add_subcommand("list", "list known curves");
  curves->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : input_error;
  }

  session S(o);
  if (*series) return cmd_series(S, false);
  if (*taylor) return cmd_series(S, true);
  if (*verify) return cmd_verify(S, check);
  if (*bc) return cmd_basechange(S);
  if (*cache) return cmd_cache(S, action);
  if (*list) return cmd_curves_list(S);
  return input_error;
}
