#pragma once

// Strands, arcs and joint structures of two interacting RNA molecules.
//
// Indices are 1-based throughout. R[1] is the 5' end of R; S[1] is the 3' end
// of S, so that noncrossing intermolecular bonds have increasing indices on
// both strands.

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rip {

enum class StrandId { R, S };

enum class PairPolicy { Any, Canonical };

/// Raised for malformed calls (out-of-range indices, foreign arcs), as opposed
/// to a structure that is well-formed but violates a joint-structure rule.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data: bad nucleotides, unreadable or invalid parameter files.
class InputError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// A configured size, memory or enumeration cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Strand {
 public:
  Strand() = default;
  Strand(StrandId id, std::string bases);
  /// A strand of `length` wildcard bases.
  static Strand wildcard(StrandId id, int length);

  StrandId id() const { return id_; }
  int length() const { return static_cast<int>(bases_.size()); }
  const std::string& bases() const { return bases_; }
  /// 1-based access.
  char at(int i) const { return bases_[static_cast<size_t>(i - 1)]; }

 private:
  StrandId id_ = StrandId::R;
  std::string bases_;
};

/// Returns true if `c` is one of A, C, G, U or the wildcard N.
bool is_nucleotide(char c);

bool pair_admissible(char x, char y, PairPolicy policy);

enum class ArcKind { RInterior, SInterior, Exterior };

/// For interior arcs `a < b` are positions on the same strand; for exterior
/// arcs `a` is the R index and `b` the S index.
struct Arc {
  ArcKind kind = ArcKind::RInterior;
  int a = 0;
  int b = 0;

  static Arc r(int i, int j) { return {ArcKind::RInterior, i, j}; }
  static Arc s(int h, int l) { return {ArcKind::SInterior, h, l}; }
  static Arc ext(int i, int j) { return {ArcKind::Exterior, i, j}; }

  auto operator<=>(const Arc&) const = default;
};

std::string to_string(const Arc& arc);

/// Knobs that affect which structures are admissible.
struct FoldConfig {
  int theta = 3;  ///< minimum number of unpaired bases enclosed by a hairpin
  PairPolicy policy = PairPolicy::Any;
  bool intermolecular = true;  ///< false forbids every R-S bond
};

class JointStructure {
 public:
  JointStructure() = default;
  JointStructure(Strand r, Strand s, std::vector<Arc> r_arcs = {},
                 std::vector<Arc> s_arcs = {}, std::vector<Arc> ext_arcs = {});
  /// Wildcard strands of the given lengths.
  static JointStructure empty(int n, int m);

  const Strand& r() const { return r_; }
  const Strand& s() const { return s_; }
  int n() const { return r_.length(); }
  int m() const { return s_.length(); }

  /// Arc lists are kept sorted, so equal arc sets compare equal.
  const std::vector<Arc>& r_arcs() const { return r_arcs_; }
  const std::vector<Arc>& s_arcs() const { return s_arcs_; }
  const std::vector<Arc>& ext_arcs() const { return ext_arcs_; }

  bool contains(const Arc& arc) const;
  /// Arcs of the given kind as a read-only view.
  const std::vector<Arc>& arcs(ArcKind kind) const;

  bool same_arcs(const JointStructure& other) const {
    return r_arcs_ == other.r_arcs_ && s_arcs_ == other.s_arcs_ &&
           ext_arcs_ == other.ext_arcs_;
  }

 private:
  Strand r_{StrandId::R, ""};
  Strand s_{StrandId::S, ""};
  std::vector<Arc> r_arcs_;
  std::vector<Arc> s_arcs_;
  std::vector<Arc> ext_arcs_;
};

std::string to_string(const JointStructure& js);

enum class ViolationKind {
  VertexReuse,
  InteriorCrossing,
  ExternalPseudoknot,
  ZigZag,
  HairpinTooSmall,
  InadmissiblePair,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<Arc> witness;
};

/// Returns nullopt when `js` is a valid joint structure under `config`;
/// otherwise the first violation found scanning exterior arcs left to right,
/// then R-arcs, then S-arcs. Throws UsageError on out-of-range indices.
std::optional<Violation> validate(const JointStructure& js,
                                  const FoldConfig& config);

struct Ancestry {
  std::vector<Arc> r_ancestors;  ///< outermost first
  std::vector<Arc> s_ancestors;
  std::optional<Arc> r_parent;
  std::optional<Arc> s_parent;
};

Ancestry ancestors(const JointStructure& js, const Arc& ext);

enum class Subsumption { RSubsumesS, SSubsumesR, Equivalent, Neither, Independent };

std::string_view to_string(Subsumption s);

/// Relation between an R-arc and an S-arc through their common descendants.
Subsumption subsumes(const JointStructure& js, const Arc& r_arc,
                     const Arc& s_arc);

/// Exterior arcs covered by an interior arc, i.e. its descendants.
std::vector<Arc> descendants(const JointStructure& js, const Arc& interior);

}  // namespace rip
