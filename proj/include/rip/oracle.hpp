#pragma once

// Exhaustive enumeration of joint structures for small strands.

#include <cstdint>
#include <functional>
#include <vector>

#include "rip/bpp.hpp"
#include "rip/energy.hpp"
#include "rip/model.hpp"

namespace rip {

struct EnumConfig {
  int n = 0;
  int m = 0;
  FoldConfig fold;
  std::uint64_t max_structures = 10'000'000;
};

using StructureSink = std::function<void(const JointStructure&)>;

/// Calls `sink` once per valid joint structure in a deterministic order and
/// returns the number of structures. Candidates are built by placing
/// noncrossing exterior arcs, then intramolecular arcs on the remaining
/// vertices, and filtered through validate. Throws ResourceError when the
/// cap is exceeded and UsageError if the strand lengths disagree with `cfg`.
std::uint64_t enumerate(const EnumConfig& cfg, const Strand& r, const Strand& s,
                        const StructureSink& sink);

/// Same ensemble from every partial matching of the n+m vertices, filtered
/// through validate. Exponential; meant for n, m <= 4.
std::uint64_t enumerate_matchings(const EnumConfig& cfg, const Strand& r, const Strand& s,
                                  const StructureSink& sink);

/// Count over wildcard strands of lengths cfg.n and cfg.m.
std::uint64_t count(const EnumConfig& cfg);

/// Partition function for each model. All models share `cfg.fold`.
std::vector<double> brute_partition(const EnumConfig& cfg, const Strand& r, const Strand& s,
                                    const std::vector<EnergyModel>& models);

double brute_partition(const Strand& r, const Strand& s, const EnergyModel& m);

std::vector<BppMatrices> brute_bpp(const EnumConfig& cfg, const Strand& r, const Strand& s,
                                   const std::vector<EnergyModel>& models);

BppMatrices brute_bpp(const Strand& r, const Strand& s, const EnergyModel& m);

}  // namespace rip
