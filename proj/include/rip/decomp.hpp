#pragma once

// Tight structures and the unique decomposition tree of a joint structure.

#include <optional>
#include <string>
#include <vector>

#include "rip/model.hpp"

namespace rip {

enum class TightType {
  NablaDown,   ///< outer R-arc only
  TriangleUp,  ///< outer S-arc only
  Square,      ///< outer R-arc and outer S-arc
  Circle,      ///< a single exterior arc
};

std::string_view to_string(TightType t);

/// A sub-span R[i,j] x S[h,l]; an interval with j < i (or l < h) is empty.
struct Span {
  int i = 1, j = 0;
  int h = 1, l = 0;

  bool r_empty() const { return j < i; }
  bool s_empty() const { return l < h; }
  auto operator<=>(const Span&) const = default;
};

std::string to_string(const Span& s);

enum class NodeLabel {
  Joint,
  RightTight,
  DoubleTight,
  Tight,
  Hybrid,         ///< a run of two or more stacked single-bond tights
  Segment,        ///< secondary structure without exterior arcs
  ClosedSegment,  ///< a segment closed by an interior arc
  EmptySegment,   ///< isolated vertices only
  InteriorArc,
  ExteriorArc,
};

std::string_view to_string(NodeLabel label);

struct TreeNode {
  NodeLabel label = NodeLabel::Joint;
  std::optional<TightType> tight;
  /// Strand of single-strand nodes (segments, interior arcs).
  std::optional<StrandId> strand;
  Span span;
  /// Which decomposition step produced the children, e.g. "a1", "b-nabla-1".
  std::string rule;
  std::optional<Arc> arc;
  std::vector<TreeNode> children;

  bool is_leaf() const { return children.empty(); }
  bool operator==(const TreeNode&) const = default;
};

struct DecompositionTree {
  int n = 0;
  int m = 0;
  TreeNode root;
  bool operator==(const DecompositionTree&) const = default;
};

/// Raised when a sub-span handed to classify_tight is not a tight structure.
class NotTight : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The structure restricted to a span: arcs with every endpoint inside it.
/// Throws UsageError if an arc crosses the span boundary.
JointStructure restrict_to(const JointStructure& js, const Span& span);

TightType classify_tight(const JointStructure& js, const Span& span);

/// Span of the unique tight structure of `js` containing the exterior arc.
Span tight_of(const JointStructure& js, const Arc& ext);

struct DoubleTightSplit {
  int a, c;  ///< end of the leading tight on R and S
  int b, d;  ///< start of the trailing tight on R and S
};

std::optional<DoubleTightSplit> is_double_tight(const JointStructure& js,
                                                const Span& span);

/// Throws UsageError if `js` is not a valid joint structure.
DecompositionTree decompose(const JointStructure& js);

/// Inverse of decompose. Strands are wildcard sequences of the root span
/// lengths. Throws UsageError on a malformed tree.
JointStructure recompose(const DecompositionTree& tree);

std::string to_string(const DecompositionTree& tree);

}  // namespace rip
