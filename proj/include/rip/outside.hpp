#pragma once

// Base-pairing probabilities.

#include <vector>

#include "rip/bpp.hpp"
#include "rip/energy.hpp"
#include "rip/inside.hpp"

namespace rip {

/// Pair probabilities of one strand from its filled tables, as a len x len
/// symmetric matrix stored row-major.
std::vector<double> secondary_bpp(const Strand& seq, const EnergyModel& m,
                                  const SecondaryTables& inside);

/// Pair probabilities of all three arc kinds. Throws like fold.
BppMatrices joint_bpp(const Strand& r, const Strand& s, const EnergyModel& m,
                      const FoldOptions& options = {});

}  // namespace rip
