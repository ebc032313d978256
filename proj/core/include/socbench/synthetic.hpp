#pragma once

#include <cstdint>

#include "socbench/frame.hpp"

namespace soc {

/// Deterministic driving-cycle-like data: a current-draw signal, voltage and
/// temperature derived from it, distractor noise features, and a SOC target
/// produced by coulomb counting (non-increasing within each trip, clipped to
/// [0, 100]). Columns: trip_id, current, voltage, temperature, noise_0..k, soc.
Frame generate_synthetic(std::size_t n_rows, std::size_t n_features, std::uint64_t seed);

}  // namespace soc
