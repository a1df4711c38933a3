#include "rip/outside.hpp"

#include <cmath>

#include "engine.hpp"

namespace rip {

namespace detail {

namespace {

struct CellPos {
  int i, j, h, l;
};

}  // namespace

void Engine::outside() {
  OutEm em;
  em.inv_q = 1.0 / q_;
  em.diff[0] = &unp_diff_[0];
  em.diff[1] = &unp_diff_[1];
  em.po = 1.0;
  root(em);

  if (N > 0 && M > 0) {
    for (int d = (N - 1) + (M - 1); d >= 0; --d) {
      std::vector<CellPos> cells;
      for (int dr = std::max(0, d - (M - 1)); dr <= std::min(N - 1, d); ++dr) {
        const int ds = d - dr;
        for (int i = 1; i + dr <= N; ++i) {
          for (int h = 1; h + ds <= M; ++h) cells.push_back({i, i + dr, h, h + ds});
        }
      }
      for (auto it = cells.rbegin(); it != cells.rend(); ++it) {
        const size_t k = k4(it->i, it->j, it->h, it->l);
        for (int t = tCount - 1; t >= 0; --t) {
          for (int c = 15; c >= 0; --c) {
            if (!exists(t, c)) continue;
            em.po = t4_[t][c].out(k);
            if (em.po == 0) continue;
            rules4(em, t, c, it->i, it->j, it->h, it->l);
          }
        }
      }
    }
  }

  for (StrandTables* X : {&R_, &S_}) {
    for (int w = X->L; w >= 0; --w) {
      for (int a = X->L - w + 1; a >= 1; --a) {
        const int b = a + w - 1;
        const size_t k = X->k2(a, b);
        for (int c = 2; c >= 0; --c) {
          em.po = X->seg[c].out(k);
          if (em.po != 0) rules2(em, *X, tSeg, c, a, b);
          em.po = X->segne[c].out(k);
          if (em.po != 0) rules2(em, *X, tSegNE, c, a, b);
        }
        if (w < 2) continue;
        em.po = X->multi2.out(k);
        if (em.po != 0) rules2(em, *X, tMulti2, 1, a, b);
        em.po = X->qb.out(k);
        if (em.po != 0) rules2(em, *X, tQb, 0, a, b);
      }
    }
  }
}

void Engine::assemble(BppMatrices& bpp, std::map<std::string, double>& usage) {
  const double inv_q = 1.0 / q_;
  auto prob = [inv_q](const Buf& b, size_t k) { return b.in(k) * b.out(k) * inv_q; };
  double rc_sum = 0, sc_sum = 0, chain_sum = 0, arc1_sum = 0, seq2_sum = 0, qb_sum = 0;

  for (StrandTables* X : {&R_, &S_}) {
    for (int i = 1; i <= X->L; ++i) {
      for (int j = i + 1; j <= X->L; ++j) {
        const double p = prob(X->qb, X->k2(i, j));
        qb_sum += p;
        if (X->id == 0) {
          bpp.p_rr(i, j) += p;
        } else {
          bpp.p_ss(i, j) += p;
        }
      }
    }
  }
  for (int i = 1; i <= N; ++i) {
    for (int h = 1; h <= M; ++h) {
      const double p = prob(arc1_, static_cast<size_t>((i - 1) * M + (h - 1)));
      arc1_sum += p;
      bpp.p_rs(i, h) += p;
    }
  }
  for (int i = 1; i <= N; ++i) {
    for (int j = i; j <= N; ++j) {
      for (int h = 1; h <= M; ++h) {
        for (int l = h; l <= M; ++l) {
          const size_t k = k4(i, j, h, l);
          for (int c = 0; c < 4; ++c) {
            const double rc = prob(t4_[tRC][c], k);
            const double sc = prob(t4_[tSC][c], k);
            const double ch = prob(t4_[tChain][c], k);
            const double s2c = prob(t4_[tSeq2C][c], k);
            rc_sum += rc;
            sc_sum += sc;
            chain_sum += ch;
            seq2_sum += s2c;
            if (i < j) bpp.p_rr(i, j) += rc;
            if (h < l) bpp.p_ss(h, l) += sc;
            bpp.p_rs(j, l) += ch;
          }
          for (int c = 0; c < 16; ++c) seq2_sum += prob(t4_[tSeq2N][c], k);
        }
      }
    }
  }
  for (int i = 1; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) bpp.p_rr(j, i) = bpp.p_rr(i, j);
  }
  for (int h = 1; h <= M; ++h) {
    for (int l = h + 1; l <= M; ++l) bpp.p_ss(l, h) = bpp.p_ss(h, l);
  }
  usage["RC"] = rc_sum;
  usage["SC"] = sc_sum;
  usage["ChainP2"] = chain_sum;
  usage["Arc1"] = arc1_sum;
  usage["Seq2"] = seq2_sum;
  usage["Qb"] = qb_sum;
  double acc = 0;
  for (int i = 1; i <= N; ++i) {
    acc += unp_diff_[0][static_cast<size_t>(i)];
    bpp.unpaired_r[static_cast<size_t>(i - 1)] = acc;
  }
  acc = 0;
  for (int h = 1; h <= M; ++h) {
    acc += unp_diff_[1][static_cast<size_t>(h)];
    bpp.unpaired_s[static_cast<size_t>(h - 1)] = acc;
  }
}

}  // namespace detail

std::vector<double> secondary_bpp(const Strand& seq, const EnergyModel& m,
                                  const SecondaryTables& t) {
  const EnergyParams& p = m.params();
  const double kT = p.kT;
  const StrandId id = seq.id();
  const int L = t.len;
  const double ea2 = std::exp(-p.alpha2 / kT);
  const double ea3 = std::exp(-p.alpha3 / kT);
  const double em1 = std::exp(-(p.alpha1 + p.alpha2) / kT);
  const size_t dd = static_cast<size_t>(L + 2) * static_cast<size_t>(L + 2);
  std::vector<double> pb(dd, 0.0), pm(dd, 0.0), pm1(dd, 0.0);
  auto at = [&t](std::vector<double>& v, int i, int j) -> double& { return v[t.idx(i, j)]; };
  auto qb = [&t](int i, int j) { return t.at(t.qb, i, j); };
  auto qm = [&t](int i, int j) { return i > j ? 0.0 : t.at(t.qm, i, j); };
  auto qm1 = [&t](int i, int j) { return t.at(t.qm1, i, j); };
  auto qs = [&t](int i, int j) { return t.at(t.qs, i, j); };

  for (int k = 1; k <= L; ++k) {
    for (int l = k + 1; l <= L; ++l) at(pb, k, l) = qs(1, k - 1) * qb(k, l) * qs(l + 1, L) / t.q;
  }
  for (int w = L; w >= 2; --w) {
    for (int i = 1; i + w - 1 <= L; ++i) {
      const int j = i + w - 1;
      const double m_in = qm(i, j);
      const double m_p = at(pm, i, j);
      if (m_p > 0 && m_in > 0) {
        for (int u = i; u <= j; ++u) {
          const double lead = std::pow(ea3, u - i) * qm1(u, j);
          at(pm1, u, j) += m_p * lead / m_in;
          if (u > i) {
            const double both = m_p * qm(i, u - 1) * qm1(u, j) / m_in;
            at(pm, i, u - 1) += both;
            at(pm1, u, j) += both;
          }
        }
      }
      const double m1_in = qm1(i, j);
      const double m1_p = at(pm1, i, j);
      if (m1_p > 0 && m1_in > 0) {
        for (int l = i + 1; l <= j; ++l) at(pb, i, l) += m1_p * qb(i, l) * ea2 * std::pow(ea3, j - l) / m1_in;
      }
      const double b_in = qb(i, j);
      const double b_p = at(pb, i, j);
      if (b_p > 0 && b_in > 0) {
        for (int k = i + 1; k < j; ++k) {
          for (int l = k + 1; l < j; ++l) {
            if (qb(k, l) == 0) continue;
            at(pb, k, l) += b_p * std::exp(-m.interior(id, i, j, k, l) / kT) * qb(k, l) / b_in;
          }
        }
        for (int u = i + 2; u < j; ++u) {
          const double part = b_p * em1 * qm(i + 1, u - 1) * qm1(u, j - 1) / b_in;
          if (part == 0) continue;
          at(pm, i + 1, u - 1) += part;
          at(pm1, u, j - 1) += part;
        }
      }
    }
  }
  std::vector<double> out(static_cast<size_t>(L) * static_cast<size_t>(L), 0.0);
  for (int i = 1; i <= L; ++i) {
    for (int j = i + 1; j <= L; ++j) {
      const double v = at(pb, i, j);
      out[static_cast<size_t>((i - 1) * L + (j - 1))] = v;
      out[static_cast<size_t>((j - 1) * L + (i - 1))] = v;
    }
  }
  return out;
}

BppMatrices joint_bpp(const Strand& r, const Strand& s, const EnergyModel& m, const FoldOptions& options) {
  FoldOptions opt = options;
  opt.outside = true;
  return *fold(r, s, m, opt).bpp;
}

}  // namespace rip
