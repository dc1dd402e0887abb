#pragma once

#include "boxlab/geometry.hpp"
#include "boxlab/rng.hpp"

namespace boxlab {

enum class OverlapRegime { Disjoint, Partial, Contained };

struct BoxPair {
  Box pred;
  Box target;
};

// Random non-degenerate pred/target pair in the requested overlap regime.
// Side lengths land in [0.2, 5]. Pairs whose edges come within `margin`
// of a derivative kink (coincident or crossing edges) are rejected and
// redrawn, so finite differences stay well conditioned.
BoxPair sample_box_pair(Rng& rng, OverlapRegime regime, double margin = 1e-3);

// Cycles regimes disjoint/partial/contained by sample index.
BoxPair sample_box_pair(Rng& rng, std::size_t index, double margin = 1e-3);

}  // namespace boxlab
