#pragma once

// On-disk cache of normalised modular-symbol maps, checksummed with FNV-1a.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "padicell/modsym.hpp"

namespace padicell {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << x;
  return os.str();
}

inline std::filesystem::path cache_directory() {
  if (const char* env = std::getenv("PADIC_ELL_CACHE"); env && *env) return env;
  return std::filesystem::current_path() / ".padic-ell-cache";
}

inline std::string cache_key(const curve_data& E) {
  std::string k = std::to_string(E.N);
  for (auto a : E.a) k += "_" + std::to_string(a);
  return k;
}

inline std::filesystem::path cache_file(const curve_data& E, const std::filesystem::path& dir) {
  return dir / (cache_key(E) + ".json");
}

namespace detail {

inline nlohmann::ordered_json map_json(const modular_symbol_map& m) {
  nlohmann::ordered_json j;
  j["sign"] = m.sign();
  j["scale"] = to_string(m.scale());
  j["D"] = m.normalization().D;
  j["target"] = to_string(m.normalization().target);
  j["second_D"] = m.normalization().second_D ? nlohmann::ordered_json(*m.normalization().second_D) : nullptr;
  j["values"] = nlohmann::ordered_json::array();
  for (const auto& v : m.values()) j["values"].push_back(to_string(v));
  return j;
}

inline modular_symbol_map map_from_json(i64 N, const nlohmann::ordered_json& j) {
  rational_vector vals;
  for (const auto& v : j.at("values")) vals.push_back(parse_rational(v.get<std::string>()));
  normalization_record rec;
  rec.D = j.at("D").get<i64>();
  rec.target = parse_rational(j.at("target").get<std::string>());
  if (!j.at("second_D").is_null()) {
    rec.second_D = j.at("second_D").get<i64>();
    rec.cross_checked = true;
  }
  return modular_symbol_map(N, j.at("sign").get<int>(), std::move(vals), parse_rational(j.at("scale").get<std::string>()),
                            rec);
}

}  // namespace detail

inline void store_symbols(const curve_data& E, const symbol_pair& s, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json body;
  body["format"] = 1;
  body["label"] = E.label;
  body["N"] = E.N;
  body["a"] = E.a;
  body["plus"] = detail::map_json(s.plus);
  body["minus"] = detail::map_json(s.minus);
  nlohmann::ordered_json doc;
  doc["body"] = body;
  doc["checksum"] = hex64(fnv1a(body.dump()));
  std::ofstream out(cache_file(E, dir));
  if (!out) throw error(errc::invalid_argument, "cannot write cache file");
  out << doc.dump(1) << "\n";
}

/// Loads a cached entry; nullopt when absent, CorruptCache when the
/// checksum or contents do not match.
inline std::optional<symbol_pair> load_symbols(const curve_data& E, const std::filesystem::path& dir) {
  const auto path = cache_file(E, dir);
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path);
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
    const auto& body = doc.at("body");
    if (hex64(fnv1a(body.dump())) != doc.at("checksum").get<std::string>())
      throw error(errc::corrupt_cache, "checksum mismatch in " + path.string());
    if (body.at("N").get<i64>() != E.N || body.at("a").get<std::array<i64, 5>>() != E.a)
      throw error(errc::corrupt_cache, "cache entry belongs to another curve");
    return symbol_pair{detail::map_from_json(E.N, body.at("plus")), detail::map_from_json(E.N, body.at("minus"))};
  } catch (const error&) {
    throw;
  } catch (const std::exception& ex) {
    throw error(errc::corrupt_cache, std::string("unreadable cache entry: ") + ex.what());
  }
}

/// Cache lookup with transparent build on a miss.
inline symbol_pair cached_symbols(const curve_data& E, const std::filesystem::path& dir, bool* hit = nullptr) {
  if (auto s = load_symbols(E, dir)) {
    if (hit) *hit = true;
    return *s;
  }
  if (hit) *hit = false;
  auto s = build_symbol_pair(E);
  store_symbols(E, s, dir);
  return s;
}

}  // namespace padicell
