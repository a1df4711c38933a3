#pragma once

// Oracle gates: DP results against exhaustive enumeration on small strands.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rip/decomp.hpp"
#include "rip/energy.hpp"

namespace rip {

/// Model with every parameter, hairpin, interior and gap energy drawn
/// uniformly from [-2kT, 2kT]; sigma is drawn from [0.1, 1].
EnergyModel random_model(std::mt19937_64& rng, int theta);

/// Random bases from ACGU.
std::string random_bases(std::mt19937_64& rng, int length);

/// Grammar node counts of one tree, keyed like kSubclasses.
std::map<std::string, double> subclass_counts(const DecompositionTree& tree);

struct VerifyOptions {
  int max_n = 6;
  int max_m = 6;
  int theta = 1;
  std::uint64_t seed = 1;
  int random_models = 2;    ///< randomized-energy models per (n, m) cell
  double tolerance = 1e-9;
  std::string corrupt;      ///< forwarded to fold
};

struct GateResult {
  std::string name;
  double max_dev = 0;
  bool pass = true;
  std::string detail;  ///< first failing cell, if any
};

struct VerifyReport {
  std::vector<GateResult> gates;
  bool pass() const;
  std::string text() const;
};

VerifyReport verify(const VerifyOptions& opt);

}  // namespace rip
