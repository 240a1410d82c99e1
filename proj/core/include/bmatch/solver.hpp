#pragma once

#include "bmatch/graph.hpp"
#include "bmatch/preferences.hpp"

namespace bmatch {

/// The unique stable b-matching of an acyclic instance, computed by
/// quota-aware loving-pair peeling (no simulation). Throws
/// CyclicInstanceError with a witness for cyclic input. The result is
/// checked against is_stable before returning.
Configuration stable_configuration(const PreferenceInstance& L, const QuotaVector& b);

}  // namespace bmatch
