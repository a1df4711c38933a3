#pragma once

// Inside pass: partition function of joint structures.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rip/bpp.hpp"
#include "rip/energy.hpp"
#include "rip/model.hpp"

namespace rip {

/// Single-strand tables. Index (i,j) spans i..j with 1 <= i <= j+1 <= len+1;
/// an empty span has i = j+1.
struct SecondaryTables {
  int len = 0;
  std::vector<double> qb;   ///< closed by (i,j)
  std::vector<double> qm;   ///< multi-loop interior with at least one branch
  std::vector<double> qm1;  ///< exactly one branch starting at i
  std::vector<double> qs;   ///< exterior segment, 1 on empty spans
  double q = 1;

  size_t idx(int i, int j) const { return static_cast<size_t>(i) * static_cast<size_t>(len + 2) + static_cast<size_t>(j); }
  double at(const std::vector<double>& t, int i, int j) const { return t[idx(i, j)]; }
};

/// Classic single-strand recursions with the model's hairpin, interior and
/// multi-loop energies.
SecondaryTables mccaskill(const Strand& seq, const EnergyModel& m);

/// Names of the grammar subclasses whose expected usage is reported by fold.
/// "RC" R-closed tights, "SC" S-closed tights, "ChainP2" stacked exterior
/// arcs beyond the first of a hybrid, "Arc1" first arcs, "Seq2" tight
/// sequences of two or more units, "Qb" arcs of plain segments.
extern const std::vector<std::string> kSubclasses;

struct FoldOptions {
  bool parallel = false;
  unsigned threads = 0;  ///< 0 picks the hardware concurrency
  bool outside = true;   ///< also compute pairing probabilities
  /// Table memory cap in MiB; 0 reads RIP_MEM_BUDGET_MB, default 4096.
  std::size_t mem_budget_mb = 0;
  /// Test hook: perturbs the productions of the named subclass.
  std::string corrupt;
};

struct FoldResult {
  double q = 0;
  std::optional<BppMatrices> bpp;
  std::size_t table_entries = 0;  ///< entries of the four-index tables
  std::size_t table_bytes = 0;
  /// Expected number of grammar nodes per subclass (requires outside).
  std::map<std::string, double> subclass_usage;
};

inline constexpr int kFourIndexTables = 72;

/// Four-index entries allocated for strands of lengths n and m.
std::size_t table_entries(int n, int m);

/// Bytes allocated by fold for strands of lengths n and m.
std::size_t required_bytes(int n, int m, bool outside);

/// Throws ResourceError when the tables exceed the memory budget.
FoldResult fold(const Strand& r, const Strand& s, const EnergyModel& m,
                const FoldOptions& options = {});

/// Number of joint structures on wildcard strands under policy Any.
/// Throws std::logic_error if the unit-weight sum is not integral.
std::uint64_t count_dp(int n, int m, int theta);

}  // namespace rip
