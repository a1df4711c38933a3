#include "rip/decomp.hpp"

#include <algorithm>
#include <sstream>

namespace rip {

std::string_view to_string(TightType t) {
  switch (t) {
    case TightType::NablaDown: return "nabla";
    case TightType::TriangleUp: return "triangle";
    case TightType::Square: return "square";
    case TightType::Circle: return "circle";
  }
  return "?";
}

std::string_view to_string(NodeLabel label) {
  switch (label) {
    case NodeLabel::Joint: return "Joint";
    case NodeLabel::RightTight: return "RightTight";
    case NodeLabel::DoubleTight: return "DoubleTight";
    case NodeLabel::Tight: return "Tight";
    case NodeLabel::Hybrid: return "Hybrid";
    case NodeLabel::Segment: return "Segment";
    case NodeLabel::ClosedSegment: return "ClosedSegment";
    case NodeLabel::EmptySegment: return "EmptySegment";
    case NodeLabel::InteriorArc: return "InteriorArc";
    case NodeLabel::ExteriorArc: return "ExteriorArc";
  }
  return "?";
}

std::string to_string(const Span& s) {
  std::ostringstream os;
  os << "(" << s.i << "," << s.j << ";" << s.h << "," << s.l << ")";
  return os.str();
}

namespace {

bool inside(const Arc& a, const Span& sp) {
  switch (a.kind) {
    case ArcKind::RInterior: return sp.i <= a.a && a.b <= sp.j;
    case ArcKind::SInterior: return sp.h <= a.a && a.b <= sp.l;
    case ArcKind::Exterior: return sp.i <= a.a && a.a <= sp.j && sp.h <= a.b && a.b <= sp.l;
  }
  return false;
}

bool touches(const Arc& a, const Span& sp) {
  auto in_r = [&](int p) { return sp.i <= p && p <= sp.j; };
  auto in_s = [&](int p) { return sp.h <= p && p <= sp.l; };
  switch (a.kind) {
    case ArcKind::RInterior: return in_r(a.a) || in_r(a.b);
    case ArcKind::SInterior: return in_s(a.a) || in_s(a.b);
    case ArcKind::Exterior: return in_r(a.a) || in_s(a.b);
  }
  return false;
}

// A maximal group of exterior arcs joined by common interior ancestors,
// i.e. one tight structure of the enclosing region.
struct Block {
  enum Kind { RClosed, SClosed, Single } kind = Single;
  Span span;
  std::vector<Arc> ext;
};

// A grammar unit: an R-closed or S-closed tight, or a run of single-bond
// tights stacked without intervening arcs (a hybrid when longer than one).
struct Unit {
  Block::Kind kind = Block::Single;
  Span span;
  std::vector<Arc> chain;
};

class Decomposer {
 public:
  explicit Decomposer(const JointStructure& js) : js_(js) {
    r_partner_.assign(static_cast<size_t>(js.n() + 2), 0);
    s_partner_.assign(static_cast<size_t>(js.m() + 2), 0);
    r_used_.assign(static_cast<size_t>(js.n() + 2), false);
    s_used_.assign(static_cast<size_t>(js.m() + 2), false);
    for (const Arc& a : js.r_arcs()) {
      r_partner_[a.a] = a.b;
      r_partner_[a.b] = a.a;
      r_used_[a.a] = r_used_[a.b] = true;
    }
    for (const Arc& a : js.s_arcs()) {
      s_partner_[a.a] = a.b;
      s_partner_[a.b] = a.a;
      s_used_[a.a] = s_used_[a.b] = true;
    }
    for (const Arc& a : js.ext_arcs()) r_used_[a.a] = s_used_[a.b] = true;
  }

  std::vector<Block> blocks(const Span& region) const {
    std::vector<Arc> ext;
    for (const Arc& e : js_.ext_arcs()) {
      if (inside(e, region)) ext.push_back(e);
    }
    std::vector<Block> out;
    if (ext.empty()) return out;
    // Ranges of exterior-arc indices covered by each interior arc.
    struct Cover { Arc arc; size_t lo, hi; };
    std::vector<Cover> covers;
    auto add_covers = [&](const std::vector<Arc>& arcs, bool on_r) {
      for (const Arc& a : arcs) {
        if (!inside(a, region)) continue;
        size_t lo = ext.size(), hi = 0;
        for (size_t k = 0; k < ext.size(); ++k) {
          const int p = on_r ? ext[k].a : ext[k].b;
          if (a.a < p && p < a.b) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
          }
        }
        if (lo <= hi && lo < ext.size()) covers.push_back({a, lo, hi});
      }
    };
    add_covers(js_.r_arcs(), true);
    add_covers(js_.s_arcs(), false);

    std::vector<bool> joined(ext.size(), false);  // joined[k]: k and k+1 share a block
    for (const Cover& c : covers) {
      for (size_t k = c.lo; k < c.hi; ++k) joined[k] = true;
    }
    size_t start = 0;
    for (size_t k = 0; k < ext.size(); ++k) {
      if (k + 1 < ext.size() && joined[k]) continue;
      Block b;
      b.ext.assign(ext.begin() + static_cast<long>(start), ext.begin() + static_cast<long>(k + 1));
      b.span = {b.ext.front().a, b.ext.back().a, b.ext.front().b, b.ext.back().b};
      for (const Cover& c : covers) {
        if (c.hi < start || c.lo > k) continue;
        if (c.arc.kind == ArcKind::RInterior) {
          b.span.i = std::min(b.span.i, c.arc.a);
          b.span.j = std::max(b.span.j, c.arc.b);
        } else {
          b.span.h = std::min(b.span.h, c.arc.a);
          b.span.l = std::max(b.span.l, c.arc.b);
        }
      }
      if (js_.contains(Arc::r(b.span.i, b.span.j))) {
        b.kind = Block::RClosed;
      } else if (js_.contains(Arc::s(b.span.h, b.span.l))) {
        b.kind = Block::SClosed;
      } else {
        b.kind = Block::Single;
      }
      out.push_back(std::move(b));
      start = k + 1;
    }
    return out;
  }

  bool empty_gap(const Arc& e, const Arc& f) const {
    for (int p = e.a + 1; p < f.a; ++p) {
      if (r_used_[p]) return false;
    }
    for (int p = e.b + 1; p < f.b; ++p) {
      if (s_used_[p]) return false;
    }
    return true;
  }

  std::vector<Unit> units(const Span& region) const {
    std::vector<Unit> out;
    for (const Block& b : blocks(region)) {
      if (b.kind == Block::Single && !out.empty() && out.back().kind == Block::Single &&
          empty_gap(out.back().chain.back(), b.ext.front())) {
        out.back().chain.push_back(b.ext.front());
        out.back().span.j = b.span.j;
        out.back().span.l = b.span.l;
        continue;
      }
      Unit u;
      u.kind = b.kind;
      u.span = b.span;
      if (b.kind == Block::Single) u.chain = b.ext;
      out.push_back(std::move(u));
    }
    return out;
  }

  TreeNode region(const Span& sp) const { return region(sp, units(sp)); }

  TreeNode region(const Span& sp, std::vector<Unit> us) const {
    if (us.empty()) {
      TreeNode node;
      node.label = NodeLabel::Segment;
      node.span = sp;
      node.rule = "segments";
      if (!sp.r_empty()) node.children.push_back(segment(StrandId::R, sp.i, sp.j));
      if (!sp.s_empty()) node.children.push_back(segment(StrandId::S, sp.h, sp.l));
      if (node.children.empty()) {
        TreeNode leaf;
        leaf.label = NodeLabel::EmptySegment;
        leaf.span = sp;
        node.children.push_back(std::move(leaf));
      }
      return node;
    }
    const Unit last = us.back();
    if (last.span.j < sp.j || last.span.l < sp.l) {
      TreeNode node;
      node.label = NodeLabel::Joint;
      node.span = sp;
      node.rule = "a2";
      node.children.push_back(region({sp.i, last.span.j, sp.h, last.span.l}, us));
      if (last.span.j < sp.j) node.children.push_back(segment(StrandId::R, last.span.j + 1, sp.j));
      if (last.span.l < sp.l) node.children.push_back(segment(StrandId::S, last.span.l + 1, sp.l));
      return node;
    }
    if (us.size() == 1 && last.span.i == sp.i && last.span.h == sp.h) return unit(last);
    TreeNode node;
    node.label = NodeLabel::RightTight;
    node.span = sp;
    node.rule = "a1";
    us.pop_back();
    const Span prefix{sp.i, last.span.i - 1, sp.h, last.span.h - 1};
    if (!prefix.r_empty() || !prefix.s_empty()) node.children.push_back(region(prefix, std::move(us)));
    node.children.push_back(unit(last));
    return node;
  }

  TreeNode unit(const Unit& u) const {
    TreeNode node;
    node.label = NodeLabel::Tight;
    node.span = u.span;
    switch (u.kind) {
      case Block::Single: return chain(u);
      case Block::RClosed: {
        const Span inner{u.span.i + 1, u.span.j - 1, u.span.h, u.span.l};
        auto us = units(inner);
        const bool square = js_.contains(Arc::s(u.span.h, u.span.l));
        node.tight = square ? TightType::Square : TightType::NablaDown;
        node.rule = square ? "b-square" : (us.size() == 1 ? "b-nabla-1" : "b-nabla-dt");
        node.children.push_back(arc_leaf(Arc::r(u.span.i, u.span.j)));
        if (us.front().span.i > inner.i) {
          node.children.push_back(segment(StrandId::R, inner.i, us.front().span.i - 1));
        }
        const int last_j = us.back().span.j;
        node.children.push_back(sequence(std::move(us)));
        if (last_j < inner.j) node.children.push_back(segment(StrandId::R, last_j + 1, inner.j));
        return node;
      }
      case Block::SClosed: {
        const Span inner{u.span.i, u.span.j, u.span.h + 1, u.span.l - 1};
        auto us = units(inner);
        node.tight = TightType::TriangleUp;
        node.rule = us.size() == 1 ? "b-triangle-1" : "b-triangle-dt";
        node.children.push_back(arc_leaf(Arc::s(u.span.h, u.span.l)));
        if (us.front().span.h > inner.h) {
          node.children.push_back(segment(StrandId::S, inner.h, us.front().span.h - 1));
        }
        const int last_l = us.back().span.l;
        node.children.push_back(sequence(std::move(us)));
        if (last_l < inner.l) node.children.push_back(segment(StrandId::S, last_l + 1, inner.l));
        return node;
      }
    }
    return node;
  }

  // Units that are tight on both ends: one unit, or a double-tight split into
  // its leading tight and the right-tight remainder.
  TreeNode sequence(std::vector<Unit> us) const {
    if (us.size() == 1) return unit(us.front());
    const Unit first = us.front();
    const Unit& last = us.back();
    TreeNode node;
    node.label = NodeLabel::DoubleTight;
    node.span = {first.span.i, last.span.j, first.span.h, last.span.l};
    node.rule = "b-dt";
    node.children.push_back(unit(first));
    us.erase(us.begin());
    const Span rest{first.span.j + 1, last.span.j, first.span.l + 1, last.span.l};
    node.children.push_back(region(rest, std::move(us)));
    return node;
  }

  TreeNode chain(const Unit& u) const {
    auto circle = [](const Arc& e) {
      TreeNode t;
      t.label = NodeLabel::Tight;
      t.tight = TightType::Circle;
      t.span = {e.a, e.a, e.b, e.b};
      t.rule = "circle";
      TreeNode leaf;
      leaf.label = NodeLabel::ExteriorArc;
      leaf.span = t.span;
      leaf.arc = e;
      t.children.push_back(std::move(leaf));
      return t;
    };
    if (u.chain.size() == 1) return circle(u.chain.front());
    TreeNode node;
    node.label = NodeLabel::Hybrid;
    node.span = u.span;
    node.rule = "hybrid";
    for (size_t k = 0; k < u.chain.size(); ++k) {
      if (k > 0) {
        const Arc& e = u.chain[k - 1];
        const Arc& f = u.chain[k];
        if (f.a > e.a + 1) node.children.push_back(empty(StrandId::R, e.a + 1, f.a - 1));
        if (f.b > e.b + 1) node.children.push_back(empty(StrandId::S, e.b + 1, f.b - 1));
      }
      node.children.push_back(circle(u.chain[k]));
    }
    return node;
  }

  static Span strand_span(StrandId x, int a, int b) {
    return x == StrandId::R ? Span{a, b, 1, 0} : Span{1, 0, a, b};
  }

  static TreeNode empty(StrandId x, int a, int b) {
    TreeNode node;
    node.label = NodeLabel::EmptySegment;
    node.strand = x;
    node.span = strand_span(x, a, b);
    return node;
  }

  TreeNode arc_leaf(const Arc& arc) const {
    TreeNode node;
    node.label = NodeLabel::InteriorArc;
    node.strand = arc.kind == ArcKind::RInterior ? StrandId::R : StrandId::S;
    node.span = strand_span(*node.strand, arc.a, arc.b);
    node.arc = arc;
    return node;
  }

  // Secondary-structure loop decomposition of a nonempty segment.
  TreeNode segment(StrandId x, int a, int b) const {
    const auto& partner = x == StrandId::R ? r_partner_ : s_partner_;
    const auto& used = x == StrandId::R ? r_used_ : s_used_;
    if (partner[a] == b && a < b) {
      TreeNode node;
      node.label = NodeLabel::ClosedSegment;
      node.strand = x;
      node.span = strand_span(x, a, b);
      node.rule = "c2";
      node.children.push_back(arc_leaf(x == StrandId::R ? Arc::r(a, b) : Arc::s(a, b)));
      if (b - a > 1) node.children.push_back(segment(x, a + 1, b - 1));
      return node;
    }
    int tail = b + 1;  // start of the maximal unpaired suffix
    while (tail > a && !used[tail - 1]) --tail;
    if (tail == a) return empty(x, a, b);
    const int close = tail - 1;
    const int open = partner[close];
    TreeNode node;
    node.label = NodeLabel::Segment;
    node.strand = x;
    node.span = strand_span(x, a, b);
    node.rule = "c1";
    if (open > a) node.children.push_back(segment(x, a, open - 1));
    node.children.push_back(segment(x, open, close));
    if (tail <= b) node.children.push_back(empty(x, tail, b));
    return node;
  }

 private:
  const JointStructure& js_;
  std::vector<int> r_partner_, s_partner_;
  std::vector<bool> r_used_, s_used_;
};

const FoldConfig kPermissive{0, PairPolicy::Any, true};

void require_valid(const JointStructure& js) {
  if (auto v = validate(js, kPermissive)) {
    throw UsageError("invalid joint structure: " + std::string(to_string(v->kind)));
  }
}

}  // namespace

JointStructure restrict_to(const JointStructure& js, const Span& span) {
  std::vector<Arc> r, s, e;
  for (const auto* set : {&js.r_arcs(), &js.s_arcs(), &js.ext_arcs()}) {
    for (const Arc& a : *set) {
      if (inside(a, span)) {
        (a.kind == ArcKind::RInterior ? r : a.kind == ArcKind::SInterior ? s : e).push_back(a);
      } else if (touches(a, span)) {
        throw UsageError("arc " + to_string(a) + " crosses span " + to_string(span));
      }
    }
  }
  return JointStructure(js.r(), js.s(), r, s, e);
}

TightType classify_tight(const JointStructure& js, const Span& span) {
  const JointStructure sub = restrict_to(js, span);
  if (sub.ext_arcs().empty()) throw NotTight("no exterior arc in " + to_string(span));
  const auto blocks = Decomposer(sub).blocks(span);
  if (blocks.size() > 1) {
    throw NotTight("not minimal: " + std::to_string(blocks.size()) + " tights in " + to_string(span));
  }
  if (blocks.front().span != span) {
    throw NotTight("span " + to_string(span) + " is not closed; tight is " +
                   to_string(blocks.front().span));
  }
  const bool r_outer = sub.contains(Arc::r(span.i, span.j));
  const bool s_outer = sub.contains(Arc::s(span.h, span.l));
  if (r_outer && s_outer) return TightType::Square;
  if (r_outer) return TightType::NablaDown;
  if (s_outer) return TightType::TriangleUp;
  return TightType::Circle;
}

Span tight_of(const JointStructure& js, const Arc& ext) {
  if (ext.kind != ArcKind::Exterior || !js.contains(ext)) {
    throw UsageError("not an exterior arc of the structure: " + to_string(ext));
  }
  const Span all{1, js.n(), 1, js.m()};
  for (const Block& b : Decomposer(js).blocks(all)) {
    if (std::find(b.ext.begin(), b.ext.end(), ext) != b.ext.end()) return b.span;
  }
  throw UsageError("exterior arc not found");
}

std::optional<DoubleTightSplit> is_double_tight(const JointStructure& js, const Span& span) {
  const JointStructure sub = restrict_to(js, span);
  const auto blocks = Decomposer(sub).blocks(span);
  if (blocks.size() < 2) return std::nullopt;
  const Span& first = blocks.front().span;
  const Span& last = blocks.back().span;
  if (first.i != span.i || first.h != span.h || last.j != span.j || last.l != span.l) {
    return std::nullopt;
  }
  return DoubleTightSplit{first.j, first.l, last.i, last.h};
}

DecompositionTree decompose(const JointStructure& js) {
  require_valid(js);
  DecompositionTree tree;
  tree.n = js.n();
  tree.m = js.m();
  const Span all{1, js.n(), 1, js.m()};
  tree.root = Decomposer(js).region(all);
  return tree;
}

namespace {

bool within(const Span& child, const Span& parent) {
  const bool r_ok = child.r_empty() || (parent.i <= child.i && child.j <= parent.j);
  const bool s_ok = child.s_empty() || (parent.h <= child.h && child.l <= parent.l);
  return r_ok && s_ok;
}

void collect(const TreeNode& node, std::vector<Arc>& r, std::vector<Arc>& s, std::vector<Arc>& e) {
  const bool arc_leaf = node.label == NodeLabel::InteriorArc || node.label == NodeLabel::ExteriorArc;
  if (arc_leaf) {
    if (!node.arc || !node.children.empty()) throw UsageError("malformed arc leaf");
    const Arc& a = *node.arc;
    if (!inside(a, node.span)) throw UsageError("arc outside its node span");
    if (node.label == NodeLabel::ExteriorArc) {
      if (a.kind != ArcKind::Exterior) throw UsageError("exterior leaf with interior arc");
      e.push_back(a);
    } else if (a.kind == ArcKind::RInterior) {
      r.push_back(a);
    } else if (a.kind == ArcKind::SInterior) {
      s.push_back(a);
    } else {
      throw UsageError("interior leaf with exterior arc");
    }
    return;
  }
  if (node.label == NodeLabel::EmptySegment) {
    if (!node.children.empty()) throw UsageError("empty segment with children");
    return;
  }
  if (node.children.empty()) {
    throw UsageError(std::string("internal node without children: ") + std::string(to_string(node.label)));
  }
  for (const TreeNode& c : node.children) {
    if (!within(c.span, node.span)) {
      throw UsageError("child span " + to_string(c.span) + " outside " + to_string(node.span));
    }
    collect(c, r, s, e);
  }
}

void print(const TreeNode& node, int depth, std::ostringstream& os) {
  os << std::string(static_cast<size_t>(depth * 2), ' ') << to_string(node.label);
  if (node.tight) os << "(" << to_string(*node.tight) << ")";
  if (node.strand) os << (*node.strand == StrandId::R ? " R" : " S");
  os << " " << to_string(node.span);
  if (!node.rule.empty()) os << " [" << node.rule << "]";
  if (node.arc) os << " " << to_string(*node.arc);
  os << "\n";
  for (const TreeNode& c : node.children) print(c, depth + 1, os);
}

}  // namespace

JointStructure recompose(const DecompositionTree& tree) {
  if (!within(tree.root.span, Span{1, tree.n, 1, tree.m})) {
    throw UsageError("root span does not cover the strands");
  }
  std::vector<Arc> r, s, e;
  collect(tree.root, r, s, e);
  JointStructure js(Strand::wildcard(StrandId::R, tree.n), Strand::wildcard(StrandId::S, tree.m), r, s, e);
  if (auto v = validate(js, kPermissive)) {
    throw UsageError("tree recomposes to an invalid structure: " + std::string(to_string(v->kind)));
  }
  return js;
}

std::string to_string(const DecompositionTree& tree) {
  std::ostringstream os;
  print(tree.root, 0, os);
  return os.str();
}

}  // namespace rip
