#include "rip/energy.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rip {

namespace {

const FoldConfig kPermissive{0, PairPolicy::Any, true};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw InputError("parameter " + key + ": not a number: '" + v + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw InputError("parameter " + key + ": not an integer: '" + v + "'");
  }
  return out;
}

}  // namespace

EnergyModel::EnergyModel(EnergyParams p) : p_(p) {}

EnergyModel EnergyModel::unit_weight(int theta) {
  EnergyParams p;
  p.theta = theta;
  return EnergyModel(p);
}

void EnergyModel::set(const std::string& key, const std::string& value) {
  static const std::map<std::string, double EnergyParams::*> reals = {
      {"kT", &EnergyParams::kT},
      {"alpha1", &EnergyParams::alpha1},
      {"alpha2", &EnergyParams::alpha2},
      {"alpha3", &EnergyParams::alpha3},
      {"beta1", &EnergyParams::beta1},
      {"beta2", &EnergyParams::beta2},
      {"beta3", &EnergyParams::beta3},
      {"sigma0", &EnergyParams::sigma0},
      {"sigma", &EnergyParams::sigma},
      {"gamma", &EnergyParams::gamma},
      {"hybrid_pair", &EnergyParams::hybrid_pair},
      {"hairpin_const", &EnergyParams::hairpin_const},
      {"hairpin_per_base", &EnergyParams::hairpin_per_base},
      {"interior_const", &EnergyParams::interior_const},
      {"interior_per_base", &EnergyParams::interior_per_base},
  };
  const std::string v = trim(value);
  if (auto it = reals.find(key); it != reals.end()) {
    p_.*(it->second) = to_double(key, v);
  } else if (key == "theta") {
    p_.theta = to_int(key, v);
  } else if (key == "pair_policy") {
    if (v == "any") {
      p_.pair_policy = PairPolicy::Any;
    } else if (v == "canonical") {
      p_.pair_policy = PairPolicy::Canonical;
    } else {
      throw InputError("pair_policy must be 'any' or 'canonical', got '" + v + "'");
    }
  } else if (key == "intermolecular") {
    const int b = to_int(key, v);
    if (b != 0 && b != 1) throw InputError("intermolecular must be 0 or 1");
    p_.intermolecular = b == 1;
  } else {
    throw InputError("unknown parameter '" + key + "'");
  }
}

void EnergyModel::check() const {
  if (!(p_.kT > 0)) throw InputError("kT must be positive");
  if (!(p_.sigma > 0 && p_.sigma <= 1)) throw InputError("sigma must lie in (0, 1]");
  if (p_.theta < 0) throw InputError("theta must be nonnegative");
}

EnergyModel EnergyModel::parse(const std::string& text) {
  EnergyModel m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      m.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  m.check();
  return m;
}

EnergyModel EnergyModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read parameter file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

double EnergyModel::hairpin(StrandId x, int i, int j) const {
  if (hairpin_override) return hairpin_override(x, i, j);
  return p_.hairpin_const + p_.hairpin_per_base * (j - i - 1);
}

double EnergyModel::interior(StrandId x, int i, int j, int k, int l) const {
  if (interior_override) return interior_override(x, i, j, k, l);
  return p_.interior_const + p_.interior_per_base * ((k - i - 1) + (j - l - 1));
}

double EnergyModel::multi(int t, int unpaired) const {
  return p_.alpha1 + p_.alpha2 * (t + 1) + p_.alpha3 * unpaired;
}

double EnergyModel::kissing(int t, int unpaired) const {
  return p_.beta1 + p_.beta2 * (t + 1) + p_.beta3 * unpaired;
}

double EnergyModel::hybrid_gap(int gap_r, int gap_s) const {
  if (gap_override) return gap_override(gap_r, gap_s);
  return p_.hybrid_pair + p_.gamma * (gap_r + gap_s);
}

std::string_view to_string(LoopKind k) {
  switch (k) {
    case LoopKind::Hairpin: return "Hairpin";
    case LoopKind::Interior: return "Interior";
    case LoopKind::Multi: return "Multi";
    case LoopKind::Kissing: return "Kissing";
    case LoopKind::Hybrid: return "Hybrid";
    case LoopKind::Exterior: return "Exterior";
  }
  return "?";
}

namespace {

void strand_loops(const JointStructure& js, StrandId x, std::vector<Loop>& out) {
  const bool on_r = x == StrandId::R;
  const int len = on_r ? js.n() : js.m();
  if (len == 0) return;
  const auto& arcs = on_r ? js.r_arcs() : js.s_arcs();
  std::vector<int> open_at(static_cast<size_t>(len + 1), -1);
  std::vector<int> close_at(static_cast<size_t>(len + 1), -1);
  for (size_t k = 0; k < arcs.size(); ++k) {
    open_at[arcs[k].a] = static_cast<int>(k);
    close_at[arcs[k].b] = static_cast<int>(k);
  }
  std::vector<const Arc*> ext_at(static_cast<size_t>(len + 1), nullptr);
  for (const Arc& e : js.ext_arcs()) ext_at[on_r ? e.a : e.b] = &e;

  // Slot 0 is the exterior loop, slot k+1 the loop closed by arcs[k].
  std::vector<Loop> loops(arcs.size() + 1);
  std::vector<int> x_count(arcs.size() + 1, 0);
  for (auto& l : loops) l.strand = x;
  std::vector<int> stack;
  auto top = [&] { return stack.empty() ? 0 : stack.back() + 1; };
  for (int p = 1; p <= len; ++p) {
    if (open_at[p] >= 0) {
      Loop& parent = loops[static_cast<size_t>(top())];
      parent.members.push_back(arcs[static_cast<size_t>(open_at[p])]);
      ++parent.t;
      stack.push_back(open_at[p]);
    } else if (close_at[p] >= 0) {
      stack.pop_back();
    } else if (ext_at[p] != nullptr) {
      const size_t slot = static_cast<size_t>(top());
      loops[slot].members.push_back(*ext_at[p]);
      ++x_count[slot];
    } else {
      Loop& level = loops[static_cast<size_t>(top())];
      level.unpaired.push_back(p);
      ++level.c2;
    }
  }
  for (size_t k = 0; k < loops.size(); ++k) {
    Loop& l = loops[k];
    if (k == 0) {
      l.kind = LoopKind::Exterior;
    } else {
      l.closing = arcs[k - 1];
      if (x_count[k] > 0) {
        l.kind = LoopKind::Kissing;
      } else if (l.t == 0) {
        l.kind = LoopKind::Hairpin;
      } else if (l.t == 1) {
        l.kind = LoopKind::Interior;
      } else {
        l.kind = LoopKind::Multi;
      }
    }
    out.push_back(std::move(l));
  }
}

}  // namespace

std::vector<Loop> loops_of(const JointStructure& js) {
  if (auto v = validate(js, kPermissive)) {
    throw UsageError("invalid joint structure: " + std::string(to_string(v->kind)));
  }
  std::vector<Loop> out;
  strand_loops(js, StrandId::R, out);
  strand_loops(js, StrandId::S, out);

  std::vector<bool> r_used(static_cast<size_t>(js.n() + 1), false);
  std::vector<bool> s_used(static_cast<size_t>(js.m() + 1), false);
  for (const Arc& a : js.r_arcs()) r_used[a.a] = r_used[a.b] = true;
  for (const Arc& a : js.s_arcs()) s_used[a.a] = s_used[a.b] = true;
  for (const Arc& e : js.ext_arcs()) r_used[e.a] = s_used[e.b] = true;
  auto free_between = [](const std::vector<bool>& used, int a, int b) {
    for (int p = a + 1; p < b; ++p) {
      if (used[p]) return false;
    }
    return true;
  };

  const auto& ext = js.ext_arcs();
  size_t k = 0;
  while (k < ext.size()) {
    size_t end = k + 1;
    while (end < ext.size() && free_between(r_used, ext[end - 1].a, ext[end].a) &&
           free_between(s_used, ext[end - 1].b, ext[end].b)) {
      ++end;
    }
    if (end - k >= 2) {
      Loop h;
      h.kind = LoopKind::Hybrid;
      for (size_t q = k; q < end; ++q) {
        h.members.push_back(ext[q]);
        if (q > k) h.gaps.emplace_back(ext[q].a - ext[q - 1].a - 1, ext[q].b - ext[q - 1].b - 1);
      }
      out.push_back(std::move(h));
    }
    k = end;
  }
  return out;
}

double loop_energy(const Loop& loop, const EnergyModel& m) {
  switch (loop.kind) {
    case LoopKind::Exterior: return 0;
    case LoopKind::Hairpin: return m.hairpin(loop.strand, loop.closing->a, loop.closing->b);
    case LoopKind::Interior: {
      const Arc& in = loop.members.front();
      return m.interior(loop.strand, loop.closing->a, loop.closing->b, in.a, in.b);
    }
    case LoopKind::Multi: return m.multi(loop.t, loop.c2);
    case LoopKind::Kissing: return m.kissing(loop.t, loop.c2);
    case LoopKind::Hybrid: {
      double g = 0;
      for (auto [gr, gs] : loop.gaps) g += m.hybrid_gap(gr, gs);
      return m.params().sigma0 + m.params().sigma * g;
    }
  }
  return 0;
}

double structure_energy(const JointStructure& js, const EnergyModel& m) {
  double f = 0;
  for (const Loop& l : loops_of(js)) f += loop_energy(l, m);
  return f;
}

double boltzmann(const JointStructure& js, const EnergyModel& m) {
  return std::exp(-structure_energy(js, m) / m.params().kT);
}

namespace {

// What one strand of a subtree exposes to the loop enclosing it.
struct Side {
  int t = 0;
  int u = 0;
  int x = 0;
  std::optional<Arc> only_child;

  void add(const Side& o) {
    if (t == 0 && o.t == 1) only_child = o.only_child;
    if (t + o.t != 1) only_child.reset();
    t += o.t;
    u += o.u;
    x += o.x;
  }
};

struct Summary {
  Side r, s;
  double energy = 0;
};

double closing_energy(const Arc& arc, const Side& inner, const EnergyModel& m) {
  const StrandId x = arc.kind == ArcKind::RInterior ? StrandId::R : StrandId::S;
  if (inner.x > 0) return m.kissing(inner.t, inner.u);
  if (inner.t == 0) return m.hairpin(x, arc.a, arc.b);
  if (inner.t == 1) return m.interior(x, arc.a, arc.b, inner.only_child->a, inner.only_child->b);
  return m.multi(inner.t, inner.u);
}

Summary walk(const TreeNode& node, const EnergyModel& m) {
  Summary out;
  switch (node.label) {
    case NodeLabel::ExteriorArc:
      out.r.x = out.s.x = 1;
      return out;
    case NodeLabel::InteriorArc:
      return out;
    case NodeLabel::EmptySegment: {
      if (!node.strand) return out;
      Side& side = *node.strand == StrandId::R ? out.r : out.s;
      side.u = *node.strand == StrandId::R ? node.span.j - node.span.i + 1
                                            : node.span.l - node.span.h + 1;
      return out;
    }
    default:
      break;
  }
  std::optional<Arc> closing;
  std::vector<Arc> circles;
  for (const TreeNode& c : node.children) {
    if (c.label == NodeLabel::InteriorArc) {
      closing = *c.arc;
      continue;
    }
    if (c.tight == TightType::Circle) circles.push_back(*c.children.front().arc);
    Summary cs = walk(c, m);
    out.r.add(cs.r);
    out.s.add(cs.s);
    out.energy += cs.energy;
  }
  if (closing) {
    Side& side = closing->kind == ArcKind::RInterior ? out.r : out.s;
    out.energy += closing_energy(*closing, side, m);
    side = Side{1, 0, 0, closing};
  }
  if (node.label == NodeLabel::Hybrid) {
    double g = 0;
    for (size_t k = 1; k < circles.size(); ++k) {
      g += m.hybrid_gap(circles[k].a - circles[k - 1].a - 1, circles[k].b - circles[k - 1].b - 1);
    }
    out.energy += m.params().sigma0 + m.params().sigma * g;
  }
  return out;
}

}  // namespace

double tree_energy(const DecompositionTree& tree, const EnergyModel& m) {
  return walk(tree.root, m).energy;
}

}  // namespace rip
