#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padicell {

/// Failure categories surfaced by the library. The CLI maps these onto exit
/// codes, so every thrown error carries exactly one.
enum class errc {
  invalid_argument,
  not_a_unit,
  out_of_domain,
  not_ordinary,
  bad_prime,
  additive_reduction,
  invalid_curve,
  precision_unreachable,
  no_reconstruction,
  not_isolated,
  inconsistent,
  bad_q,
  level_too_low,
  precision_exhausted,
  indeterminate,
  not_real_character,
  wild_character,
  conductor_clash,
  not_closed,
  non_real_group,
  corrupt_cache,
};

constexpr std::string_view to_string(errc e) {
  switch (e) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::not_a_unit: return "NotAUnit";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::not_ordinary: return "NotOrdinary";
    case errc::bad_prime: return "BadPrime";
    case errc::additive_reduction: return "AdditiveReduction";
    case errc::invalid_curve: return "InvalidCurve";
    case errc::precision_unreachable: return "PrecisionUnreachable";
    case errc::no_reconstruction: return "NoReconstruction";
    case errc::not_isolated: return "NotIsolated";
    case errc::inconsistent: return "Inconsistent";
    case errc::bad_q: return "BadQ";
    case errc::level_too_low: return "LevelTooLow";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::indeterminate: return "Indeterminate";
    case errc::not_real_character: return "NotRealCharacter";
    case errc::wild_character: return "WildCharacter";
    case errc::conductor_clash: return "ConductorClash";
    case errc::not_closed: return "NotClosed";
    case errc::non_real_group: return "NonRealGroup";
    case errc::corrupt_cache: return "CorruptCache";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace padicell
