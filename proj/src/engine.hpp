#pragma once

// Grammar tables shared by the inside and outside passes. Every production
// is written once, as a call em(weight, unpaired, children...), so that the
// inside pass sums products and the outside pass distributes the same terms.
//
// Contexts describe the loop a level belongs to on each strand: E exterior,
// M multi (no exterior arc endpoints), K kissing (at least one), F kissing
// weights with none. Units of a tight sequence are chains of stacked
// exterior arcs, R-closed tights (RC) and S-closed tights (SC).

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rip/energy.hpp"
#include "rip/inside.hpp"
#include "rip/model.hpp"

namespace rip::detail {

enum Ctx : int { kE = 0, kM = 1, kK = 2, kF = 3 };

inline int wclass(int c) { return c == kE ? 0 : c == kM ? 1 : 2; }
inline int ctx2(int cr, int cs) { return cr * 4 + cs; }
inline bool chainable(int c) { return c == kE || c == kK; }
inline int cw(int cr, int cs) { return (cr == kK ? 2 : 0) + (cs == kK ? 1 : 0); }

struct Split {
  int first, last;
};

inline const std::vector<Split>& splits(int c) {
  static const std::array<std::vector<Split>, 4> table = {{
      {{kE, kE}},
      {{kM, kM}},
      {{kK, kK}, {kK, kF}, {kF, kK}},
      {{kF, kF}},
  }};
  return table[static_cast<size_t>(c)];
}

struct Ref {
  double* in;
  double* out;
};

/// Unpaired intervals of a production, tagged by strand (0 = R, 1 = S).
struct Unp {
  int n = 0;
  int strand[2] = {0, 0};
  int a[2] = {0, 0};
  int b[2] = {0, 0};
};

inline Unp unp(int x, int a, int b) {
  Unp u;
  if (a <= b) {
    u.strand[0] = x;
    u.a[0] = a;
    u.b[0] = b;
    u.n = 1;
  }
  return u;
}

inline Unp unp(int x, int a, int b, int y, int c, int d) {
  Unp u = unp(x, a, b);
  if (c <= d) {
    u.strand[u.n] = y;
    u.a[u.n] = c;
    u.b[u.n] = d;
    ++u.n;
  }
  return u;
}

inline const Unp kNone{};

/// Inside and outside values of a table, interleaved per entry.
struct Buf {
  std::vector<double> v;
  size_t stride = 1;
  void alloc(size_t n, bool with_out) {
    stride = with_out ? 2 : 1;
    v.assign(n * stride, 0.0);
  }
  double& in(size_t k) { return v[k * stride]; }
  double& out(size_t k) { return v[k * stride + 1]; }
  double in(size_t k) const { return v[k * stride]; }
  double out(size_t k) const { return v[k * stride + 1]; }
  Ref at(size_t k) {
    double* p = v.data() + k * stride;
    return {p, stride == 2 ? p + 1 : nullptr};
  }
};

inline size_t tri(int i, int j) {
  return static_cast<size_t>(j) * static_cast<size_t>(j - 1) / 2 + static_cast<size_t>(i - 1);
}

/// Tables of one strand over spans (a,b) with 1 <= a <= b+1 <= L+1.
struct StrandTables {
  int id = 0;
  int L = 0;
  size_t D = 2;
  size_t T = 0;
  std::vector<char> adm;
  std::vector<double> ehp;   ///< hairpin weight, 0 below the minimum gap
  std::vector<double> eint;  ///< interior weight by (i,j) then (k,l)
  Buf qb, multi2;
  Buf seg[3], segne[3];
  std::vector<double> pw[3];

  size_t k2(int a, int b) const { return static_cast<size_t>(a) * D + static_cast<size_t>(b); }
  double ei(int i, int j, int k, int l) const { return eint[tri(i, j) * T + tri(k, l)]; }
};

enum Sub { sRC, sSC, sChain, sArc1, sSeq2, sQb, sCount };

enum T2 { tQb, tMulti2, tSegNE, tSeg };
enum T4 { tChain, tRC, tSC, tGUN, tGUCe, tGUCn, tSeq2N, tSeq2C, tSeq, tCount };

struct InEm {
  double acc = 0;
  template <class... R>
  void operator()(double w, const Unp&, R... r) {
    acc += w * (1.0 * ... * *r.in);
  }
};

struct OutEm {
  double po = 0;
  double inv_q = 0;
  std::vector<double>* diff[2] = {nullptr, nullptr};

  template <class... R>
  void operator()(double w, const Unp& u, R... r) {
    const double base = po * w;
    if (base == 0) return;
    constexpr size_t n = sizeof...(R);
    std::array<Ref, n> refs{r...};
    double all = base;
    for (size_t k = 0; k < n; ++k) {
      double others = base;
      for (size_t q = 0; q < n; ++q) {
        if (q != k) others *= *refs[q].in;
      }
      *refs[k].out += others;
      all *= *refs[k].in;
    }
    if (u.n > 0 && all != 0) {
      const double p = all * inv_q;
      for (int t = 0; t < u.n; ++t) {
        auto& d = *diff[u.strand[t]];
        d[static_cast<size_t>(u.a[t])] += p;
        d[static_cast<size_t>(u.b[t] + 1)] -= p;
      }
    }
  }
};

class Engine {
 public:
  Engine(const Strand& r, const Strand& s, const EnergyModel& m, const FoldOptions& opt);

  void inside();
  void outside();
  double q() const { return q_; }
  void assemble(BppMatrices& bpp, std::map<std::string, double>& usage);

  int N, M;
  size_t TN, TM;

  size_t k4(int i, int j, int h, int l) const { return tri(i, j) * TM + tri(h, l); }
  Buf& tab(int table, int c);
  Ref cell(int table, int c, int i, int j, int h, int l) { return tab(table, c).at(k4(i, j, h, l)); }
  static Ref seg(StrandTables& X, int cls, int a, int b) { return X.seg[cls].at(X.k2(a, b)); }
  static Ref segne(StrandTables& X, int cls, int a, int b) { return X.segne[cls].at(X.k2(a, b)); }
  Ref arc1(int i, int h) { return arc1_.at(static_cast<size_t>((i - 1) * M + (h - 1))); }
  /// Contexts a four-index table is kept for: 16 pairs, 4 sides, or the 4
  /// chainable pairs.
  static int contexts(int table);
  static bool exists(int table, int c);

  template <class Em> void rules2(Em& em, StrandTables& X, int table, int cls, int a, int b);
  template <class Em> void rules4(Em& em, int table, int c, int i, int j, int h, int l);
  template <class Em> void root(Em& em);

  void fill_strand(StrandTables& X);
  void fill_cell(int i, int j, int h, int l);
  void init_strand(StrandTables& X, const Strand& seq, StrandId id);

  const EnergyModel& m_;
  FoldOptions opt_;
  bool with_out_;
  double wb_[4], wu_[4];
  double eK1_, eM1_, eS0_;
  std::vector<double> egap_;
  size_t gap_dim_ = 1;
  double corr_[sCount] = {1, 1, 1, 1, 1, 1};

  StrandTables R_, S_;
  Buf arc1_;
  Buf t4_[tCount][16];
  Buf root_;
  double q_ = 0;
  std::vector<double> unp_diff_[2];

 private:
  template <class Em> void chain_units(Em& em, double w, int cr, int cs, int i, int j, int h, int l);
  template <class Em> void rc_rules(Em& em, int cs, int i, int j, int r, int s);
  template <class Em> void sc_rules(Em& em, int cr, int i, int j, int h, int l);
};

inline int Engine::contexts(int table) {
  switch (table) {
    case tChain:
    case tGUCe:
    case tGUCn:
    case tSeq2C:
    case tRC:
    case tSC: return 4;
    default: return 16;
  }
}

inline bool Engine::exists(int table, int c) {
  switch (table) {
    case tGUCe:
    case tGUCn:
    case tSeq2C: return c < 4;
    default: return c < contexts(table);
  }
}

inline Buf& Engine::tab(int table, int c) { return t4_[table][c]; }

// Chain units at (i,j;h,l): a single exterior arc, or a stack of two or more
// with the hybrid initiation.
template <class Em>
void Engine::chain_units(Em& em, double w, int cr, int cs, int i, int j, int h, int l) {
  if (i == j && h == l) em(w, kNone, arc1(i, h));
  if (i < j && h < l) em(w * eS0_, kNone, cell(tChain, cw(cr, cs), i, j, h, l));
}

template <class Em>
void Engine::rules2(Em& em, StrandTables& X, int table, int cls, int a, int b) {
  const int x = X.id;
  switch (table) {
    case tQb: {
      if (!X.adm[X.k2(a, b)]) return;
      const double c = corr_[sQb];
      const double hp = X.ehp[X.k2(a, b)];
      if (hp != 0) em(c * hp, unp(x, a + 1, b - 1));
      for (int k = a + 1; k + 1 < b; ++k) {
        for (int l = k + 1; l < b; ++l) {
          if (!X.adm[X.k2(k, l)]) continue;
          em(c * X.ei(a, b, k, l), unp(x, a + 1, k - 1, x, l + 1, b - 1), X.qb.at(X.k2(k, l)));
        }
      }
      if (b - a - 1 >= 4) em(c * eM1_, kNone, X.multi2.at(X.k2(a + 1, b - 1)));
      return;
    }
    case tMulti2: {
      for (int l = a + 3; l <= b; ++l) {
        const double w = wb_[kM] * X.pw[1][static_cast<size_t>(b - l)];
        for (int k = a + 2; k < l; ++k) {
          if (!X.adm[X.k2(k, l)]) continue;
          em(w, unp(x, l + 1, b), segne(X, 1, a, k - 1), X.qb.at(X.k2(k, l)));
        }
      }
      return;
    }
    case tSegNE: {
      const double wbc = cls == 0 ? wb_[kE] : cls == 1 ? wb_[kM] : wb_[kK];
      for (int l = a + 1; l <= b; ++l) {
        const double w = wbc * X.pw[cls][static_cast<size_t>(b - l)];
        for (int k = a; k < l; ++k) {
          if (!X.adm[X.k2(k, l)]) continue;
          em(w, unp(x, l + 1, b), seg(X, cls, a, k - 1), X.qb.at(X.k2(k, l)));
        }
      }
      return;
    }
    case tSeg: {
      em(X.pw[cls][static_cast<size_t>(b - a + 1)], unp(x, a, b));
      if (b > a) em(1.0, kNone, segne(X, cls, a, b));
      return;
    }
  }
}

// R-arc (i,j) closing a loop whose content is tight on S over r..s.
template <class Em>
void Engine::rc_rules(Em& em, int cs, int i, int j, int r, int s) {
  StrandTables& X = R_;
  if (j - i < 2 || !X.adm[X.k2(i, j)]) return;
  const double c = corr_[sRC];
  const double wbm = wb_[kM];
  for (int a = i + 1; a < j; ++a) {
    for (int b = a; b < j; ++b) {
      em(c * eK1_, kNone, seg(X, 2, i + 1, a - 1), cell(tSeq, ctx2(kK, cs), a, b, r, s),
         seg(X, 2, b + 1, j - 1));
      if (cs != kK) {
        em(c * eM1_ * wb_[cs], kNone, seg(X, 1, i + 1, a - 1), cell(tSC, kM, a, b, r, s),
           seg(X, 1, b + 1, j - 1));
      }
      em(c * eM1_, kNone, seg(X, 1, i + 1, a - 1), cell(tSeq2N, ctx2(kM, cs), a, b, r, s),
         seg(X, 1, b + 1, j - 1));
      if (a == b) continue;
      const Ref inner = cell(tRC, cs, a, b, r, s);
      em(c * eM1_ * wbm, kNone, segne(X, 1, i + 1, a - 1), seg(X, 1, b + 1, j - 1), inner);
      em(c * eM1_ * wbm * X.pw[1][static_cast<size_t>(a - i - 1)], unp(0, i + 1, a - 1),
         segne(X, 1, b + 1, j - 1), inner);
      em(c * X.ei(i, j, a, b), unp(0, i + 1, a - 1, 0, b + 1, j - 1), inner);
    }
  }
}

// S-arc (h,l) closing a loop whose content is tight on R over i..j. A lone
// R-closed tight is excluded: that shape belongs to the R-closed tight.
template <class Em>
void Engine::sc_rules(Em& em, int cr, int i, int j, int h, int l) {
  StrandTables& X = S_;
  if (l - h < 2 || !X.adm[X.k2(h, l)]) return;
  const double c = corr_[sSC];
  const double wbm = wb_[kM];
  for (int b = h + 1; b < l; ++b) {
    for (int d = b; d < l; ++d) {
      const Ref left_k = seg(X, 2, h + 1, b - 1);
      const Ref right_k = seg(X, 2, d + 1, l - 1);
      if (chainable(cr)) {
        if (i == j && b == d) em(c * eK1_, kNone, left_k, arc1(i, b), right_k);
        if (i < j && b < d) {
          em(c * eK1_ * eS0_, kNone, left_k, cell(tChain, cw(cr, kK), i, j, b, d), right_k);
        }
        em(c * eK1_, kNone, left_k, cell(tSeq2C, cw(cr, kK), i, j, b, d), right_k);
      }
      em(c * eK1_, kNone, left_k, cell(tSeq2N, ctx2(cr, kK), i, j, b, d), right_k);
      em(c * eM1_, kNone, seg(X, 1, h + 1, b - 1), cell(tSeq2N, ctx2(cr, kM), i, j, b, d),
         seg(X, 1, d + 1, l - 1));
      if (b == d) continue;
      const Ref inner = cell(tSC, cr, i, j, b, d);
      em(c * eM1_ * wbm, kNone, segne(X, 1, h + 1, b - 1), seg(X, 1, d + 1, l - 1), inner);
      em(c * eM1_ * wbm * X.pw[1][static_cast<size_t>(b - h - 1)], unp(1, h + 1, b - 1),
         segne(X, 1, d + 1, l - 1), inner);
      em(c * X.ei(h, l, b, d), unp(1, h + 1, b - 1, 1, d + 1, l - 1), inner);
    }
  }
}

template <class Em>
void Engine::rules4(Em& em, int table, int c, int i, int j, int h, int l) {
  StrandTables& X = R_;
  StrandTables& Y = S_;
  switch (table) {
    case tChain: {
      // c indexes the unpaired weights of the gaps: K or E on each strand.
      if (i == j || h == l || !arc1_.in(static_cast<size_t>((j - 1) * M + (l - 1)))) return;
      const int cr = (c & 2) ? kK : kE;
      const int cs = (c & 1) ? kK : kE;
      const auto& pr = X.pw[wclass(cr)];
      const auto& ps = Y.pw[wclass(cs)];
      const double k = corr_[sChain];
      for (int jp = i; jp < j; ++jp) {
        for (int lp = h; lp < l; ++lp) {
          const int gr = j - jp - 1;
          const int gs = l - lp - 1;
          const double w = k * egap_[static_cast<size_t>(gr) * gap_dim_ + static_cast<size_t>(gs)] *
                           pr[static_cast<size_t>(gr)] * ps[static_cast<size_t>(gs)];
          const Unp u = unp(0, jp + 1, j - 1, 1, lp + 1, l - 1);
          if (jp == i && lp == h) em(w, u, arc1(i, h));
          if (jp > i && lp > h) em(w, u, cell(tChain, c, i, jp, h, lp));
        }
      }
      return;
    }
    case tRC: rc_rules(em, c, i, j, h, l); return;
    case tSC: sc_rules(em, c, i, j, h, l); return;
    case tGUN: {
      const int cr = c / 4, cs = c % 4;
      const int kr = wclass(cr), ks = wclass(cs);
      for (int ap = i; ap <= j; ++ap) {
        for (int bp = h; bp <= l; ++bp) {
          const Ref sr = seg(X, kr, i, ap - 1);
          const Ref ss = seg(Y, ks, h, bp - 1);
          if (cr != kK) {
            const Ref u = cell(tRC, cs, ap, j, bp, l);
            if (*u.in != 0) em(wb_[cr], kNone, sr, ss, u);
          }
          if (cs != kK) {
            const Ref u = cell(tSC, cr, ap, j, bp, l);
            if (*u.in != 0) em(wb_[cs], kNone, sr, ss, u);
          }
        }
      }
      return;
    }
    case tGUCe:
    case tGUCn: {
      const int cr = (c & 2) ? kK : kE;
      const int cs = (c & 1) ? kK : kE;
      const int kr = wclass(cr), ks = wclass(cs);
      for (int ap = i; ap <= j; ++ap) {
        for (int bp = h; bp <= l; ++bp) {
          const bool single = ap == j && bp == l;
          const bool stack = ap < j && bp < l;
          if (!single && !stack) continue;
          const Ref unit = single ? arc1(j, l) : cell(tChain, c, ap, j, bp, l);
          const double w = single ? 1.0 : eS0_;
          if (table == tGUCe) {
            em(w * X.pw[kr][static_cast<size_t>(ap - i)] * Y.pw[ks][static_cast<size_t>(bp - h)],
               unp(0, i, ap - 1, 1, h, bp - 1), unit);
          } else {
            em(w, kNone, segne(X, kr, i, ap - 1), seg(Y, ks, h, bp - 1), unit);
            em(w * X.pw[kr][static_cast<size_t>(ap - i)], unp(0, i, ap - 1), segne(Y, ks, h, bp - 1),
               unit);
          }
        }
      }
      return;
    }
    case tSeq2N: {
      const int cr = c / 4, cs = c % 4;
      const double k = corr_[sSeq2];
      for (const Split& xr : splits(cr)) {
        for (const Split& xs : splits(cs)) {
          const int c1 = ctx2(xr.first, xs.first);
          const int c2 = ctx2(xr.last, xs.last);
          for (int jp = i; jp < j; ++jp) {
            for (int lp = h; lp < l; ++lp) {
              const Ref head = cell(tSeq, c1, i, jp, h, lp);
              if (*head.in == 0) continue;
              em(k, kNone, head, cell(tGUN, c2, jp + 1, j, lp + 1, l));
            }
          }
        }
      }
      return;
    }
    case tSeq2C: {
      const int cr = (c & 2) ? kK : kE;
      const int cs = (c & 1) ? kK : kE;
      const double k = corr_[sSeq2];
      for (const Split& xr : splits(cr)) {
        if (!chainable(xr.last)) continue;
        for (const Split& xs : splits(cs)) {
          if (!chainable(xs.last)) continue;
          const int c1r = xr.first, c1s = xs.first;
          const int c1 = ctx2(c1r, c1s);
          const int c2 = cw(xr.last, xs.last);
          for (int jp = i; jp < j; ++jp) {
            for (int lp = h; lp < l; ++lp) {
              const Ref gn = cell(tGUCn, c2, jp + 1, j, lp + 1, l);
              const Ref ge = cell(tGUCe, c2, jp + 1, j, lp + 1, l);
              em(k, kNone, cell(tSeq, c1, i, jp, h, lp), gn);
              if (c1r != kK) em(k * wb_[c1r], kNone, cell(tRC, c1s, i, jp, h, lp), ge);
              if (c1s != kK) em(k * wb_[c1s], kNone, cell(tSC, c1r, i, jp, h, lp), ge);
              em(k, kNone, cell(tSeq2N, c1, i, jp, h, lp), ge);
            }
          }
        }
      }
      return;
    }
    case tSeq: {
      const int cr = c / 4, cs = c % 4;
      if (chainable(cr) && chainable(cs)) {
        chain_units(em, 1.0, cr, cs, i, j, h, l);
        em(1.0, kNone, cell(tSeq2C, cw(cr, cs), i, j, h, l));
      }
      if (cr != kK) em(wb_[cr], kNone, cell(tRC, cs, i, j, h, l));
      if (cs != kK) em(wb_[cs], kNone, cell(tSC, cr, i, j, h, l));
      em(1.0, kNone, cell(tSeq2N, c, i, j, h, l));
      return;
    }
  }
}

template <class Em>
void Engine::root(Em& em) {
  em(1.0, kNone, seg(R_, 0, 1, N), seg(S_, 0, 1, M));
  const int ee = ctx2(kE, kE);
  for (int i = 1; i <= N; ++i) {
    for (int j = i; j <= N; ++j) {
      for (int h = 1; h <= M; ++h) {
        for (int l = h; l <= M; ++l) {
          em(1.0, kNone, seg(R_, 0, 1, i - 1), seg(S_, 0, 1, h - 1), cell(tSeq, ee, i, j, h, l),
             seg(R_, 0, j + 1, N), seg(S_, 0, l + 1, M));
        }
      }
    }
  }
}

}  // namespace rip::detail
