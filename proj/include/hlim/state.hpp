#pragma once

#include "hlim/constraints.hpp"

namespace hlim {

/// SHMHD prognostic state in Elsasser variables: a = (A~, A3), b = (B~, B3).
struct ElsasserState {
  VectorState a;
  VectorState b;
  double t = 0.0;

  const GridPtr &grid() const noexcept { return a.h1.grid_ptr(); }
  static ElsasserState zeros(const GridPtr &grid) { return {VectorState::zeros(grid), VectorState::zeros(grid), 0.0}; }
};

/// PEHM prognostic state. Vertical components are diagnosed, never stored.
struct PehmState {
  HorizontalField a_h;
  HorizontalField b_h;
  double t = 0.0;

  const GridPtr &grid() const noexcept { return a_h.h1.grid_ptr(); }
  static PehmState zeros(const GridPtr &grid) {
    return {{SpectralField(grid), SpectralField(grid)}, {SpectralField(grid), SpectralField(grid)}, 0.0};
  }
};

/// SHMHD state whose verticals are the hydrostatic reconstructions of the
/// PEHM horizontals.
ElsasserState lift_to_elsasser(const PehmState &s);

} // namespace hlim
