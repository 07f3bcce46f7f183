#pragma once

#include <stdexcept>
#include <string>

namespace nhcl {

enum class errc {
  invalid_dimension,
  invalid_parameter,
  spec_error,
  degenerate_state,
  stiffness,
  insufficient_data,
  near_exceptional_point,
  consistency,
  invalid_window,
  chart_singularity,
  singular_structure,
  unsupported_chart,
  incompatible_structure,
  near_resonance,
  config,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::invalid_dimension: return "invalid dimension";
    case errc::invalid_parameter: return "invalid parameter";
    case errc::spec_error: return "spec error";
    case errc::degenerate_state: return "degenerate state";
    case errc::stiffness: return "stiffness";
    case errc::insufficient_data: return "insufficient data";
    case errc::near_exceptional_point: return "near exceptional point";
    case errc::consistency: return "consistency";
    case errc::invalid_window: return "invalid window";
    case errc::chart_singularity: return "chart singularity";
    case errc::singular_structure: return "singular structure";
    case errc::unsupported_chart: return "unsupported chart";
    case errc::incompatible_structure: return "incompatible structure";
    case errc::near_resonance: return "near resonance";
    case errc::config: return "config";
  }
  return "unknown";
}

// Single exception type for the library; callers branch on code().
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace nhcl
