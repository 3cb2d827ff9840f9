#pragma once

// Umbrella header for the contiguity library.

#include "contig/complex.hpp"
#include "contig/contiguity.hpp"
#include "contig/error.hpp"
#include "contig/estimator.hpp"
#include "contig/h0.hpp"
#include "contig/homology.hpp"
#include "contig/loop_invariant.hpp"
#include "contig/maps.hpp"
#include "contig/metric.hpp"
#include "contig/random.hpp"
#include "contig/sampler.hpp"
#include "contig/standard.hpp"
#include "contig/subdivision.hpp"
#include "contig/union_find.hpp"
#include "contig/walk.hpp"

namespace contig {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace contig
