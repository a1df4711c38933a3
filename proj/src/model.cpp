#include "rip/model.hpp"

#include <algorithm>
#include <sstream>

namespace rip {

namespace {

char upper(char c) {
  if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return c == 'T' ? 'U' : c;
}

bool covers(const Arc& interior, const Arc& ext) {
  const int pos = interior.kind == ArcKind::RInterior ? ext.a : ext.b;
  return interior.a < pos && pos < interior.b;
}

bool crossing(const Arc& x, const Arc& y) {
  return (x.a < y.a && y.a < x.b && x.b < y.b) ||
         (y.a < x.a && x.a < y.b && y.b < x.b);
}

}  // namespace

Strand::Strand(StrandId id, std::string bases) : id_(id), bases_(std::move(bases)) {
  for (char& c : bases_) {
    c = upper(c);
    if (!is_nucleotide(c)) {
      throw InputError(std::string("invalid nucleotide '") + c + "'");
    }
  }
}

Strand Strand::wildcard(StrandId id, int length) {
  return Strand(id, std::string(static_cast<size_t>(std::max(length, 0)), 'N'));
}

bool is_nucleotide(char c) {
  c = upper(c);
  return c == 'A' || c == 'C' || c == 'G' || c == 'U' || c == 'N';
}

bool pair_admissible(char x, char y, PairPolicy policy) {
  if (policy == PairPolicy::Any) return true;
  x = upper(x);
  y = upper(y);
  if (x == 'N' || y == 'N') return true;
  switch (x) {
    case 'A': return y == 'U';
    case 'U': return y == 'A' || y == 'G';
    case 'C': return y == 'G';
    case 'G': return y == 'C' || y == 'U';
    default: return false;
  }
}

std::string to_string(const Arc& arc) {
  std::ostringstream os;
  switch (arc.kind) {
    case ArcKind::RInterior: os << "(R" << arc.a << ",R" << arc.b << ")"; break;
    case ArcKind::SInterior: os << "(S" << arc.a << ",S" << arc.b << ")"; break;
    case ArcKind::Exterior: os << "(R" << arc.a << ",S" << arc.b << ")"; break;
  }
  return os.str();
}

JointStructure::JointStructure(Strand r, Strand s, std::vector<Arc> r_arcs,
                               std::vector<Arc> s_arcs, std::vector<Arc> ext_arcs)
    : r_(std::move(r)),
      s_(std::move(s)),
      r_arcs_(std::move(r_arcs)),
      s_arcs_(std::move(s_arcs)),
      ext_arcs_(std::move(ext_arcs)) {
  auto check_kind = [](const std::vector<Arc>& arcs, ArcKind kind) {
    for (const Arc& a : arcs) {
      if (a.kind != kind) throw UsageError("arc " + to_string(a) + " in wrong set");
    }
  };
  check_kind(r_arcs_, ArcKind::RInterior);
  check_kind(s_arcs_, ArcKind::SInterior);
  check_kind(ext_arcs_, ArcKind::Exterior);
  std::sort(r_arcs_.begin(), r_arcs_.end());
  std::sort(s_arcs_.begin(), s_arcs_.end());
  std::sort(ext_arcs_.begin(), ext_arcs_.end());
}

JointStructure JointStructure::empty(int n, int m) {
  return JointStructure(Strand::wildcard(StrandId::R, n),
                        Strand::wildcard(StrandId::S, m));
}

const std::vector<Arc>& JointStructure::arcs(ArcKind kind) const {
  switch (kind) {
    case ArcKind::RInterior: return r_arcs_;
    case ArcKind::SInterior: return s_arcs_;
    case ArcKind::Exterior: break;
  }
  return ext_arcs_;
}

bool JointStructure::contains(const Arc& arc) const {
  const auto& v = arcs(arc.kind);
  return std::binary_search(v.begin(), v.end(), arc);
}

std::string to_string(const JointStructure& js) {
  std::ostringstream os;
  os << "J(N=" << js.n() << ",M=" << js.m() << ";";
  for (const auto* set : {&js.r_arcs(), &js.s_arcs(), &js.ext_arcs()}) {
    for (const Arc& a : *set) os << " " << to_string(a);
  }
  os << ")";
  return os.str();
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::VertexReuse: return "VertexReuse";
    case ViolationKind::InteriorCrossing: return "InteriorCrossing";
    case ViolationKind::ExternalPseudoknot: return "ExternalPseudoknot";
    case ViolationKind::ZigZag: return "ZigZag";
    case ViolationKind::HairpinTooSmall: return "HairpinTooSmall";
    case ViolationKind::InadmissiblePair: return "InadmissiblePair";
  }
  return "?";
}

std::string_view to_string(Subsumption s) {
  switch (s) {
    case Subsumption::RSubsumesS: return "RSubsumesS";
    case Subsumption::SSubsumesR: return "SSubsumesR";
    case Subsumption::Equivalent: return "Equivalent";
    case Subsumption::Neither: return "Neither";
    case Subsumption::Independent: return "Independent";
  }
  return "?";
}

namespace {

void check_ranges(const JointStructure& js) {
  const int n = js.n();
  const int m = js.m();
  for (const Arc& a : js.r_arcs()) {
    if (a.a < 1 || a.b > n || a.a >= a.b) throw UsageError("R-arc out of range: " + to_string(a));
  }
  for (const Arc& a : js.s_arcs()) {
    if (a.a < 1 || a.b > m || a.a >= a.b) throw UsageError("S-arc out of range: " + to_string(a));
  }
  for (const Arc& a : js.ext_arcs()) {
    if (a.a < 1 || a.a > n || a.b < 1 || a.b > m) {
      throw UsageError("exterior arc out of range: " + to_string(a));
    }
  }
}

// Arcs in scan order: exterior left to right, then R-arcs, then S-arcs.
std::vector<Arc> scan_order(const JointStructure& js) {
  std::vector<Arc> all(js.ext_arcs());
  all.insert(all.end(), js.r_arcs().begin(), js.r_arcs().end());
  all.insert(all.end(), js.s_arcs().begin(), js.s_arcs().end());
  return all;
}

bool has_inner_arc(const JointStructure& js, const Arc& arc) {
  const bool on_r = arc.kind == ArcKind::RInterior;
  for (const Arc& e : js.ext_arcs()) {
    if (covers(arc, e)) return true;
  }
  for (const Arc& o : on_r ? js.r_arcs() : js.s_arcs()) {
    if (arc.a < o.a && o.b < arc.b) return true;
  }
  return false;
}

}  // namespace

std::optional<Violation> validate(const JointStructure& js, const FoldConfig& config) {
  check_ranges(js);
  const auto all = scan_order(js);

  std::vector<const Arc*> r_used(static_cast<size_t>(js.n() + 1), nullptr);
  std::vector<const Arc*> s_used(static_cast<size_t>(js.m() + 1), nullptr);
  for (const Arc& arc : all) {
    std::vector<std::pair<std::vector<const Arc*>*, int>> ends;
    switch (arc.kind) {
      case ArcKind::RInterior: ends = {{&r_used, arc.a}, {&r_used, arc.b}}; break;
      case ArcKind::SInterior: ends = {{&s_used, arc.a}, {&s_used, arc.b}}; break;
      case ArcKind::Exterior: ends = {{&r_used, arc.a}, {&s_used, arc.b}}; break;
    }
    for (auto [used, pos] : ends) {
      auto& slot = (*used)[static_cast<size_t>(pos)];
      if (slot != nullptr) return Violation{ViolationKind::VertexReuse, {*slot, arc}};
      slot = &arc;
    }
  }

  for (const Arc& arc : all) {
    bool ok = true;
    switch (arc.kind) {
      case ArcKind::RInterior:
        ok = pair_admissible(js.r().at(arc.a), js.r().at(arc.b), config.policy);
        break;
      case ArcKind::SInterior:
        ok = pair_admissible(js.s().at(arc.a), js.s().at(arc.b), config.policy);
        break;
      case ArcKind::Exterior:
        ok = config.intermolecular &&
             pair_admissible(js.r().at(arc.a), js.s().at(arc.b), config.policy);
        break;
    }
    if (!ok) return Violation{ViolationKind::InadmissiblePair, {arc}};
  }

  const auto& ext = js.ext_arcs();
  for (size_t k = 0; k + 1 < ext.size(); ++k) {
    if (ext[k + 1].b <= ext[k].b) {
      return Violation{ViolationKind::ExternalPseudoknot, {ext[k], ext[k + 1]}};
    }
  }

  for (const auto* set : {&js.r_arcs(), &js.s_arcs()}) {
    for (size_t x = 0; x < set->size(); ++x) {
      for (size_t y = x + 1; y < set->size(); ++y) {
        if (crossing((*set)[x], (*set)[y])) {
          return Violation{ViolationKind::InteriorCrossing, {(*set)[x], (*set)[y]}};
        }
      }
    }
  }

  for (const auto* set : {&js.r_arcs(), &js.s_arcs()}) {
    for (const Arc& arc : *set) {
      if (!has_inner_arc(js, arc) && arc.b - arc.a - 1 < config.theta) {
        return Violation{ViolationKind::HairpinTooSmall, {arc}};
      }
    }
  }

  for (const Arc& ra : js.r_arcs()) {
    for (const Arc& sa : js.s_arcs()) {
      if (subsumes(js, ra, sa) == Subsumption::Neither) {
        return Violation{ViolationKind::ZigZag, {ra, sa}};
      }
    }
  }
  return std::nullopt;
}

std::vector<Arc> descendants(const JointStructure& js, const Arc& interior) {
  std::vector<Arc> out;
  for (const Arc& e : js.ext_arcs()) {
    if (covers(interior, e)) out.push_back(e);
  }
  return out;
}

Ancestry ancestors(const JointStructure& js, const Arc& ext) {
  if (ext.kind != ArcKind::Exterior || !js.contains(ext)) {
    throw UsageError("not an exterior arc of the structure: " + to_string(ext));
  }
  Ancestry out;
  for (const Arc& a : js.r_arcs()) {
    if (covers(a, ext)) out.r_ancestors.push_back(a);
  }
  for (const Arc& a : js.s_arcs()) {
    if (covers(a, ext)) out.s_ancestors.push_back(a);
  }
  // Ancestors of one vertex are nested, so sorting by start point orders them
  // from the outermost to the parent.
  if (!out.r_ancestors.empty()) out.r_parent = out.r_ancestors.back();
  if (!out.s_ancestors.empty()) out.s_parent = out.s_ancestors.back();
  return out;
}

Subsumption subsumes(const JointStructure& js, const Arc& r_arc, const Arc& s_arc) {
  if (r_arc.kind != ArcKind::RInterior || !js.contains(r_arc)) {
    throw UsageError("not an R-arc of the structure: " + to_string(r_arc));
  }
  if (s_arc.kind != ArcKind::SInterior || !js.contains(s_arc)) {
    throw UsageError("not an S-arc of the structure: " + to_string(s_arc));
  }
  bool common = false;
  bool r_in_s = true;  // every descendant of r_arc lies inside s_arc
  bool s_in_r = true;
  for (const Arc& e : js.ext_arcs()) {
    const bool under_r = covers(r_arc, e);
    const bool under_s = covers(s_arc, e);
    common = common || (under_r && under_s);
    if (under_r && !under_s) r_in_s = false;
    if (under_s && !under_r) s_in_r = false;
  }
  if (!common) return Subsumption::Independent;
  if (r_in_s && s_in_r) return Subsumption::Equivalent;
  if (s_in_r) return Subsumption::RSubsumesS;
  if (r_in_s) return Subsumption::SSubsumesR;
  return Subsumption::Neither;
}

}  // namespace rip
