#pragma once

#include <cstddef>
#include <utility>

#include "nhcl/linalg.hpp"

namespace nhcl {

// Amplitude vector with its (possibly decaying) squared norm cached.
class QuantumState {
 public:
  QuantumState() = default;

  explicit QuantumState(CVector amplitudes, double t = 0.0)
      : amplitudes_(std::move(amplitudes)), t_(t), norm_sq_(amplitudes_.squaredNorm()) {
    if (!(norm_sq_ > 0.0)) throw error(errc::degenerate_state, "state has zero norm");
  }

  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double t() const { return t_; }
  double norm_sq() const { return norm_sq_; }

  QuantumState normalized() const { return QuantumState(amplitudes_ / std::sqrt(norm_sq_), t_); }

 private:
  CVector amplitudes_;
  double t_ = 0.0;
  double norm_sq_ = 0.0;
};

}  // namespace nhcl
