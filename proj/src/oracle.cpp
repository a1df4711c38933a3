#include "rip/oracle.hpp"

#include <cmath>

namespace rip {

namespace {

void check_lengths(const EnumConfig& cfg, const Strand& r, const Strand& s) {
  if (cfg.n < 0 || cfg.m < 0) throw UsageError("negative strand length");
  if (r.length() != cfg.n || s.length() != cfg.m) {
    throw UsageError("strand lengths do not match the enumeration config");
  }
}

// Every noncrossing set of arcs on the given positions.
void matchings(const std::vector<int>& pos, size_t lo, size_t hi, std::vector<Arc>& cur,
               ArcKind kind, std::vector<std::vector<Arc>>& out) {
  if (lo >= hi) {
    out.push_back(cur);
    return;
  }
  matchings(pos, lo + 1, hi, cur, kind, out);
  for (size_t q = lo + 1; q < hi; ++q) {
    // Pair pos[lo] with pos[q]; inside and outside are enumerated independently.
    std::vector<std::vector<Arc>> inner;
    std::vector<Arc> none;
    matchings(pos, lo + 1, q, none, kind, inner);
    for (const auto& in : inner) {
      const size_t mark = cur.size();
      cur.push_back({kind, pos[lo], pos[q]});
      cur.insert(cur.end(), in.begin(), in.end());
      matchings(pos, q + 1, hi, cur, kind, out);
      cur.resize(mark);
    }
  }
}

std::vector<std::vector<Arc>> matchings(const std::vector<int>& pos, ArcKind kind) {
  std::vector<std::vector<Arc>> out;
  std::vector<Arc> cur;
  matchings(pos, 0, pos.size(), cur, kind, out);
  return out;
}

class Counter {
 public:
  Counter(const EnumConfig& cfg, const StructureSink& sink) : cfg_(cfg), sink_(sink) {}

  void offer(const JointStructure& js) {
    if (validate(js, cfg_.fold)) return;
    if (++count_ > cfg_.max_structures) {
      throw ResourceError("enumeration exceeds the cap of " + std::to_string(cfg_.max_structures) +
                          " structures");
    }
    sink_(js);
  }

  std::uint64_t count() const { return count_; }

 private:
  const EnumConfig& cfg_;
  const StructureSink& sink_;
  std::uint64_t count_ = 0;
};

void exterior_sets(int n, int m, int from_r, int from_s, std::vector<Arc>& cur,
                   std::vector<std::vector<Arc>>& out) {
  out.push_back(cur);
  for (int a = from_r; a <= n; ++a) {
    for (int b = from_s; b <= m; ++b) {
      cur.push_back(Arc::ext(a, b));
      exterior_sets(n, m, a + 1, b + 1, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::uint64_t enumerate(const EnumConfig& cfg, const Strand& r, const Strand& s,
                        const StructureSink& sink) {
  check_lengths(cfg, r, s);
  Counter counter(cfg, sink);
  std::vector<std::vector<Arc>> ext_sets;
  std::vector<Arc> cur;
  exterior_sets(cfg.n, cfg.m, 1, 1, cur, ext_sets);
  for (const auto& ext : ext_sets) {
    std::vector<bool> r_used(static_cast<size_t>(cfg.n + 1), false);
    std::vector<bool> s_used(static_cast<size_t>(cfg.m + 1), false);
    for (const Arc& e : ext) r_used[e.a] = s_used[e.b] = true;
    std::vector<int> r_free, s_free;
    for (int p = 1; p <= cfg.n; ++p) {
      if (!r_used[p]) r_free.push_back(p);
    }
    for (int p = 1; p <= cfg.m; ++p) {
      if (!s_used[p]) s_free.push_back(p);
    }
    const auto r_sets = matchings(r_free, ArcKind::RInterior);
    const auto s_sets = matchings(s_free, ArcKind::SInterior);
    for (const auto& ra : r_sets) {
      for (const auto& sa : s_sets) counter.offer(JointStructure(r, s, ra, sa, ext));
    }
  }
  return counter.count();
}

std::uint64_t enumerate_matchings(const EnumConfig& cfg, const Strand& r, const Strand& s,
                                  const StructureSink& sink) {
  check_lengths(cfg, r, s);
  Counter counter(cfg, sink);
  // Vertices 0..n-1 are R1..Rn, n..n+m-1 are S1..Sm.
  const int total = cfg.n + cfg.m;
  std::vector<bool> used(static_cast<size_t>(total), false);
  std::vector<Arc> ra, sa, ea;
  std::function<void(int)> rec = [&](int v) {
    while (v < total && used[v]) ++v;
    if (v == total) {
      counter.offer(JointStructure(r, s, ra, sa, ea));
      return;
    }
    used[v] = true;
    rec(v + 1);
    for (int w = v + 1; w < total; ++w) {
      if (used[w]) continue;
      used[w] = true;
      std::vector<Arc>* target = nullptr;
      Arc arc;
      if (w < cfg.n) {
        arc = Arc::r(v + 1, w + 1);
        target = &ra;
      } else if (v >= cfg.n) {
        arc = Arc::s(v - cfg.n + 1, w - cfg.n + 1);
        target = &sa;
      } else {
        arc = Arc::ext(v + 1, w - cfg.n + 1);
        target = &ea;
      }
      target->push_back(arc);
      rec(v + 1);
      target->pop_back();
      used[w] = false;
    }
    used[v] = false;
  };
  rec(0);
  return counter.count();
}

std::uint64_t count(const EnumConfig& cfg) {
  return enumerate(cfg, Strand::wildcard(StrandId::R, cfg.n), Strand::wildcard(StrandId::S, cfg.m),
                   [](const JointStructure&) {});
}

namespace {

std::vector<double> weights(const std::vector<Loop>& loops, const std::vector<EnergyModel>& models) {
  std::vector<double> w;
  w.reserve(models.size());
  for (const EnergyModel& m : models) {
    double f = 0;
    for (const Loop& l : loops) f += loop_energy(l, m);
    w.push_back(std::exp(-f / m.params().kT));
  }
  return w;
}

EnumConfig config_for(const Strand& r, const Strand& s, const EnergyModel& m) {
  EnumConfig cfg;
  cfg.n = r.length();
  cfg.m = s.length();
  cfg.fold = m.config();
  return cfg;
}

}  // namespace

std::vector<double> brute_partition(const EnumConfig& cfg, const Strand& r, const Strand& s,
                                    const std::vector<EnergyModel>& models) {
  std::vector<double> q(models.size(), 0.0);
  enumerate(cfg, r, s, [&](const JointStructure& js) {
    const auto w = weights(loops_of(js), models);
    for (size_t k = 0; k < w.size(); ++k) q[k] += w[k];
  });
  return q;
}

double brute_partition(const Strand& r, const Strand& s, const EnergyModel& m) {
  return brute_partition(config_for(r, s, m), r, s, {m}).front();
}

std::vector<BppMatrices> brute_bpp(const EnumConfig& cfg, const Strand& r, const Strand& s,
                                   const std::vector<EnergyModel>& models) {
  std::vector<BppMatrices> out(models.size(), BppMatrices::zeros(cfg.n, cfg.m));
  std::vector<double> q(models.size(), 0.0);
  enumerate(cfg, r, s, [&](const JointStructure& js) {
    const auto w = weights(loops_of(js), models);
    std::vector<bool> r_paired(static_cast<size_t>(cfg.n + 1), false);
    std::vector<bool> s_paired(static_cast<size_t>(cfg.m + 1), false);
    for (const Arc& a : js.r_arcs()) r_paired[a.a] = r_paired[a.b] = true;
    for (const Arc& a : js.s_arcs()) s_paired[a.a] = s_paired[a.b] = true;
    for (const Arc& e : js.ext_arcs()) r_paired[e.a] = s_paired[e.b] = true;
    for (size_t k = 0; k < w.size(); ++k) {
      BppMatrices& b = out[k];
      q[k] += w[k];
      for (const Arc& a : js.r_arcs()) {
        b.p_rr(a.a, a.b) += w[k];
        b.p_rr(a.b, a.a) += w[k];
      }
      for (const Arc& a : js.s_arcs()) {
        b.p_ss(a.a, a.b) += w[k];
        b.p_ss(a.b, a.a) += w[k];
      }
      for (const Arc& e : js.ext_arcs()) b.p_rs(e.a, e.b) += w[k];
      for (int p = 1; p <= cfg.n; ++p) {
        if (!r_paired[p]) b.unpaired_r[static_cast<size_t>(p - 1)] += w[k];
      }
      for (int p = 1; p <= cfg.m; ++p) {
        if (!s_paired[p]) b.unpaired_s[static_cast<size_t>(p - 1)] += w[k];
      }
    }
  });
  for (size_t k = 0; k < out.size(); ++k) {
    for (auto* v : {&out[k].rr, &out[k].ss, &out[k].rs, &out[k].unpaired_r, &out[k].unpaired_s}) {
      for (double& x : *v) x /= q[k];
    }
  }
  return out;
}

BppMatrices brute_bpp(const Strand& r, const Strand& s, const EnergyModel& m) {
  return brute_bpp(config_for(r, s, m), r, s, {m}).front();
}

}  // namespace rip
