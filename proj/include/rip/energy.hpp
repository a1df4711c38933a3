#pragma once

// Loop-based free energy of joint structures.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rip/decomp.hpp"
#include "rip/model.hpp"

namespace rip {

inline constexpr double kDefaultKT = 0.61632077549;

/// Scalar parameters. Defaults give unit-weight mode.
struct EnergyParams {
  double kT = kDefaultKT;
  int theta = 3;
  double alpha1 = 0, alpha2 = 0, alpha3 = 0;  ///< multi-loop
  double beta1 = 0, beta2 = 0, beta3 = 0;     ///< kissing loop
  double sigma0 = 0;                          ///< hybrid initiation
  double sigma = 1;                           ///< hybrid scaling, 0 < sigma <= 1
  double gamma = 0;                           ///< hybrid gap cost per unpaired base
  double hybrid_pair = 0;                     ///< hybrid gap cost per stacked step
  double hairpin_const = 0, hairpin_per_base = 0;
  double interior_const = 0, interior_per_base = 0;
  PairPolicy pair_policy = PairPolicy::Any;
  bool intermolecular = true;
};

class EnergyModel {
 public:
  using HairpinFn = std::function<double(StrandId, int i, int j)>;
  using InteriorFn = std::function<double(StrandId, int i, int j, int k, int l)>;
  using GapFn = std::function<double(int gap_r, int gap_s)>;

  EnergyModel() = default;
  explicit EnergyModel(EnergyParams p);

  static EnergyModel unit_weight(int theta = 3);
  /// Parses `key = value` lines; '#' starts a comment. Throws InputError.
  static EnergyModel parse(const std::string& text);
  static EnergyModel load(const std::string& path);

  /// Sets one parameter from its textual value. Throws InputError.
  void set(const std::string& key, const std::string& value);

  const EnergyParams& params() const { return p_; }
  EnergyParams& params() { return p_; }
  FoldConfig config() const { return {p_.theta, p_.pair_policy, p_.intermolecular}; }

  /// Position-dependent overrides of the affine defaults.
  HairpinFn hairpin_override;
  InteriorFn interior_override;
  GapFn gap_override;

  /// Hairpin closed by (i,j).
  double hairpin(StrandId x, int i, int j) const;
  /// Interior loop closed by (i,j) with inner arc (k,l).
  double interior(StrandId x, int i, int j, int k, int l) const;
  double multi(int t, int unpaired) const;
  double kissing(int t, int unpaired) const;
  /// Cost of one step of a hybrid with the given unpaired gaps, before scaling.
  double hybrid_gap(int gap_r, int gap_s) const;

  /// Throws InputError unless kT > 0, 0 < sigma <= 1 and theta >= 0.
  void check() const;

 private:
  EnergyParams p_;
};

enum class LoopKind { Hairpin, Interior, Multi, Kissing, Hybrid, Exterior };

std::string_view to_string(LoopKind k);

struct Loop {
  LoopKind kind = LoopKind::Exterior;
  StrandId strand = StrandId::R;   ///< unused for hybrids
  std::optional<Arc> closing;      ///< absent for exterior loops and hybrids
  std::vector<Arc> members;        ///< child arcs, or the stacked exterior arcs of a hybrid
  int t = 0;                       ///< interior child arcs
  int c2 = 0;                      ///< unpaired vertices of the loop
  std::vector<int> unpaired;       ///< positions on `strand`
  std::vector<std::pair<int, int>> gaps;  ///< hybrid gaps (R, S)
};

/// One loop per interior arc, one exterior loop per nonempty strand, and one
/// loop per hybrid. Throws UsageError if `js` is invalid.
std::vector<Loop> loops_of(const JointStructure& js);

double loop_energy(const Loop& loop, const EnergyModel& m);

double structure_energy(const JointStructure& js, const EnergyModel& m);

double boltzmann(const JointStructure& js, const EnergyModel& m);

/// Energy computed by walking the decomposition tree, independent of loops_of.
double tree_energy(const DecompositionTree& tree, const EnergyModel& m);

}  // namespace rip
