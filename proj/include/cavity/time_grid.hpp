#pragma once

#include "cavity/core.hpp"

#include <cstddef>

namespace cavity {

/// Uniform grid in scaled time lambda1 * t.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 20.0;
  std::size_t steps = 2001;

  void validate() const {
    if (!(t_start >= 0.0) || !(t_end > t_start))
      throw ModelError("time grid needs t_end > t_start >= 0");
    if (steps < 2) throw ModelError("time grid needs at least 2 steps");
  }

  double spacing() const { return (t_end - t_start) / static_cast<double>(steps - 1); }

  double at(std::size_t k) const {
    return k + 1 == steps ? t_end : t_start + static_cast<double>(k) * spacing();
  }

  std::size_t size() const { return steps; }
};

}  // namespace cavity
