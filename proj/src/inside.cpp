#include "rip/inside.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "engine.hpp"

namespace rip {

const std::vector<std::string> kSubclasses = {"RC", "SC", "ChainP2", "Arc1", "Seq2", "Qb"};

namespace {

size_t tri_size(int n) { return static_cast<size_t>(n) * static_cast<size_t>(n + 1) / 2; }

size_t strand_bytes(int len, bool outside) {
  const size_t d = static_cast<size_t>(len + 2);
  const size_t t = tri_size(len);
  const size_t bufs = 8 * d * d * (outside ? 2 : 1);
  return 8 * (bufs + t * t + d * d) + d * d;
}

std::size_t budget_mb(const FoldOptions& opt) {
  if (opt.mem_budget_mb > 0) return opt.mem_budget_mb;
  if (const char* env = std::getenv("RIP_MEM_BUDGET_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

}  // namespace

std::size_t table_entries(int n, int m) {
  return static_cast<std::size_t>(kFourIndexTables) * tri_size(n) * tri_size(m);
}

std::size_t required_bytes(int n, int m, bool outside) {
  return 8 * table_entries(n, m) * (outside ? 2 : 1) + strand_bytes(n, outside) +
         strand_bytes(m, outside) + 16 * static_cast<size_t>(n) * static_cast<size_t>(m);
}

namespace detail {

Engine::Engine(const Strand& r, const Strand& s, const EnergyModel& m, const FoldOptions& opt)
    : N(r.length()), M(s.length()), TN(tri_size(N)), TM(tri_size(M)), m_(m), opt_(opt),
      with_out_(opt.outside) {
  m.check();
  const std::size_t need = required_bytes(N, M, with_out_);
  const std::size_t cap = budget_mb(opt);
  if (need > cap * 1024 * 1024) {
    throw ResourceError("tables need " + std::to_string(need / (1024 * 1024) + 1) +
                        " MiB, budget is " + std::to_string(cap) + " MiB");
  }
  const EnergyParams& p = m.params();
  const double kT = p.kT;
  auto e = [kT](double f) { return std::exp(-f / kT); };
  wb_[kE] = 1;
  wb_[kM] = e(p.alpha2);
  wb_[kK] = wb_[kF] = e(p.beta2);
  wu_[kE] = 1;
  wu_[kM] = e(p.alpha3);
  wu_[kK] = wu_[kF] = e(p.beta3);
  eK1_ = e(p.beta1 + p.beta2);
  eM1_ = e(p.alpha1 + p.alpha2);
  eS0_ = e(p.sigma0);
  gap_dim_ = static_cast<size_t>(std::max(N, M) + 1);
  egap_.resize(gap_dim_ * gap_dim_);
  for (size_t gr = 0; gr < gap_dim_; ++gr) {
    for (size_t gs = 0; gs < gap_dim_; ++gs) {
      egap_[gr * gap_dim_ + gs] = e(p.sigma * m.hybrid_gap(static_cast<int>(gr), static_cast<int>(gs)));
    }
  }
  if (!opt.corrupt.empty()) {
    const auto it = std::find(kSubclasses.begin(), kSubclasses.end(), opt.corrupt);
    if (it == kSubclasses.end()) throw UsageError("unknown subclass '" + opt.corrupt + "'");
    corr_[it - kSubclasses.begin()] = 1.25;
  }

  init_strand(R_, r, StrandId::R);
  init_strand(S_, s, StrandId::S);
  R_.id = 0;
  S_.id = 1;
  arc1_.alloc(static_cast<size_t>(N) * static_cast<size_t>(M), with_out_);
  const FoldConfig cfg = m.config();
  for (int i = 1; i <= N; ++i) {
    for (int h = 1; h <= M; ++h) {
      const bool ok = cfg.intermolecular && pair_admissible(r.at(i), s.at(h), cfg.policy);
      arc1_.in(static_cast<size_t>((i - 1) * M + (h - 1))) = ok ? corr_[sArc1] : 0.0;
    }
  }
  for (int t = 0; t < tCount; ++t) {
    for (int c = 0; c < 16; ++c) {
      if (exists(t, c)) t4_[t][c].alloc(TN * TM, with_out_);
    }
  }
  unp_diff_[0].assign(static_cast<size_t>(N + 2), 0.0);
  unp_diff_[1].assign(static_cast<size_t>(M + 2), 0.0);
}

void Engine::init_strand(StrandTables& X, const Strand& seq, StrandId id) {
  const EnergyParams& p = m_.params();
  const FoldConfig cfg = m_.config();
  const double kT = p.kT;
  X.L = seq.length();
  X.D = static_cast<size_t>(X.L + 2);
  X.T = tri_size(X.L);
  const size_t dd = X.D * X.D;
  X.adm.assign(dd, 0);
  X.ehp.assign(dd, 0.0);
  for (int i = 1; i <= X.L; ++i) {
    for (int j = i + 1; j <= X.L; ++j) {
      if (!pair_admissible(seq.at(i), seq.at(j), cfg.policy)) continue;
      X.adm[X.k2(i, j)] = 1;
      if (j - i - 1 >= cfg.theta) X.ehp[X.k2(i, j)] = std::exp(-m_.hairpin(id, i, j) / kT);
    }
  }
  X.eint.assign(X.T * X.T, 0.0);
  for (int i = 1; i <= X.L; ++i) {
    for (int j = i + 3; j <= X.L; ++j) {
      if (!X.adm[X.k2(i, j)]) continue;
      for (int k = i + 1; k < j; ++k) {
        for (int l = k + 1; l < j; ++l) {
          if (!X.adm[X.k2(k, l)]) continue;
          X.eint[tri(i, j) * X.T + tri(k, l)] = std::exp(-m_.interior(id, i, j, k, l) / kT);
        }
      }
    }
  }
  const double unpaired[3] = {wu_[kE], wu_[kM], wu_[kK]};
  for (int c = 0; c < 3; ++c) {
    X.pw[c].assign(static_cast<size_t>(X.L + 2), 1.0);
    for (size_t k = 1; k < X.pw[c].size(); ++k) X.pw[c][k] = X.pw[c][k - 1] * unpaired[c];
    X.seg[c].alloc(dd, with_out_);
    X.segne[c].alloc(dd, with_out_);
  }
  X.qb.alloc(dd, with_out_);
  X.multi2.alloc(dd, with_out_);
}

void Engine::fill_strand(StrandTables& X) {
  for (int w = 0; w <= X.L; ++w) {
    for (int a = 1; a + w - 1 <= X.L; ++a) {
      const int b = a + w - 1;
      const size_t k = X.k2(a, b);
      if (w >= 2) {
        InEm q;
        rules2(q, X, tQb, 0, a, b);
        X.qb.in(k) = q.acc;
        InEm mu;
        rules2(mu, X, tMulti2, 1, a, b);
        X.multi2.in(k) = mu.acc;
      }
      for (int c = 0; c < 3; ++c) {
        InEm ne;
        rules2(ne, X, tSegNE, c, a, b);
        X.segne[c].in(k) = ne.acc;
        InEm sg;
        rules2(sg, X, tSeg, c, a, b);
        X.seg[c].in(k) = sg.acc;
      }
    }
  }
}

void Engine::fill_cell(int i, int j, int h, int l) {
  const size_t k = k4(i, j, h, l);
  for (int t = 0; t < tCount; ++t) {
    for (int c = 0; c < 16; ++c) {
      if (!exists(t, c)) continue;
      InEm em;
      rules4(em, t, c, i, j, h, l);
      t4_[t][c].in(k) = em.acc;
    }
  }
}

namespace {

struct CellPos {
  int i, j, h, l;
};

std::vector<CellPos> cells_at(int n, int m, int d) {
  std::vector<CellPos> out;
  for (int dr = std::max(0, d - (m - 1)); dr <= std::min(n - 1, d); ++dr) {
    const int ds = d - dr;
    for (int i = 1; i + dr <= n; ++i) {
      for (int h = 1; h + ds <= m; ++h) out.push_back({i, i + dr, h, h + ds});
    }
  }
  return out;
}

}  // namespace

void Engine::inside() {
  fill_strand(R_);
  fill_strand(S_);
  unsigned threads = 1;
  if (opt_.parallel) {
    threads = opt_.threads > 0 ? opt_.threads : std::max(1u, std::thread::hardware_concurrency());
  }
  if (N > 0 && M > 0) {
    for (int d = 0; d <= (N - 1) + (M - 1); ++d) {
      const auto cells = cells_at(N, M, d);
      if (threads <= 1 || cells.size() < 2 * threads) {
        for (const CellPos& c : cells) fill_cell(c.i, c.j, c.h, c.l);
        continue;
      }
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([this, &cells, t, threads] {
          for (size_t k = t; k < cells.size(); k += threads) {
            fill_cell(cells[k].i, cells[k].j, cells[k].h, cells[k].l);
          }
        });
      }
      for (auto& th : pool) th.join();
    }
  }
  InEm em;
  root(em);
  q_ = em.acc;
  if (!std::isfinite(q_) || q_ <= 0) {
    throw ResourceError("partition function overflowed double precision");
  }
}

}  // namespace detail

FoldResult fold(const Strand& r, const Strand& s, const EnergyModel& m, const FoldOptions& options) {
  detail::Engine engine(r, s, m, options);
  engine.inside();
  FoldResult out;
  out.q = engine.q();
  out.table_entries = table_entries(r.length(), s.length());
  out.table_bytes = required_bytes(r.length(), s.length(), options.outside);
  if (options.outside) {
    engine.outside();
    BppMatrices bpp = BppMatrices::zeros(r.length(), s.length());
    engine.assemble(bpp, out.subclass_usage);
    out.bpp = std::move(bpp);
  }
  return out;
}

std::uint64_t count_dp(int n, int m, int theta) {
  if (n < 0 || m < 0) throw UsageError("negative strand length");
  FoldOptions opt;
  opt.outside = false;
  const double q = fold(Strand::wildcard(StrandId::R, n), Strand::wildcard(StrandId::S, m),
                        EnergyModel::unit_weight(theta), opt)
                       .q;
  const double r = std::round(q);
  if (std::fabs(q - r) > std::max(1e-6, r * 1e-12) || r >= 1.8e19) {
    throw std::logic_error("unit-weight partition function is not an integer: " + std::to_string(q));
  }
  return static_cast<std::uint64_t>(r);
}

SecondaryTables mccaskill(const Strand& seq, const EnergyModel& m) {
  m.check();
  const EnergyParams& p = m.params();
  const FoldConfig cfg = m.config();
  const double kT = p.kT;
  const StrandId id = seq.id();
  SecondaryTables t;
  t.len = seq.length();
  const size_t dd = static_cast<size_t>(t.len + 2) * static_cast<size_t>(t.len + 2);
  t.qb.assign(dd, 0.0);
  t.qm.assign(dd, 0.0);
  t.qm1.assign(dd, 0.0);
  t.qs.assign(dd, 0.0);
  const double ea2 = std::exp(-p.alpha2 / kT);
  const double ea3 = std::exp(-p.alpha3 / kT);
  const double em1 = std::exp(-(p.alpha1 + p.alpha2) / kT);
  const int L = t.len;
  auto adm = [&](int i, int j) { return pair_admissible(seq.at(i), seq.at(j), cfg.policy); };
  for (int w = 0; w <= L; ++w) {
    for (int i = 1; i + w - 1 <= L; ++i) {
      const int j = i + w - 1;
      if (w >= 2 && adm(i, j)) {
        double b = 0;
        if (j - i - 1 >= cfg.theta) b += std::exp(-m.hairpin(id, i, j) / kT);
        for (int k = i + 1; k < j; ++k) {
          for (int l = k + 1; l < j; ++l) {
            const double inner = t.at(t.qb, k, l);
            if (inner != 0) b += std::exp(-m.interior(id, i, j, k, l) / kT) * inner;
          }
        }
        for (int u = i + 2; u < j; ++u) b += em1 * t.at(t.qm, i + 1, u - 1) * t.at(t.qm1, u, j - 1);
        t.qb[t.idx(i, j)] = b;
      }
      double m1 = 0;
      for (int l = i + 1; l <= j; ++l) m1 += t.at(t.qb, i, l) * ea2 * std::pow(ea3, j - l);
      t.qm1[t.idx(i, j)] = m1;
      double mm = 0;
      for (int u = i; u <= j; ++u) {
        mm += (std::pow(ea3, u - i) + (u > i ? t.at(t.qm, i, u - 1) : 0.0)) * t.at(t.qm1, u, j);
      }
      t.qm[t.idx(i, j)] = mm;
      double s = 1;
      for (int k = i; k <= j; ++k) {
        for (int l = k + 1; l <= j; ++l) s += t.at(t.qs, i, k - 1) * t.at(t.qb, k, l);
      }
      t.qs[t.idx(i, j)] = s;
    }
  }
  t.q = t.at(t.qs, 1, L);
  return t;
}

}  // namespace rip
