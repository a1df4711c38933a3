#include "rip/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rip/inside.hpp"
#include "rip/oracle.hpp"

namespace rip {

namespace {

std::uint64_t mix(std::uint64_t s, std::uint64_t x) {
  s ^= x * 0x9E3779B97F4A7C15ULL;
  s ^= s >> 29;
  s *= 0xBF58476D1CE4E5B9ULL;
  s ^= s >> 32;
  s *= 0x94D049BB133111EBULL;
  s ^= s >> 31;
  return s;
}

double unit_interval(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// A unit is an R- or S-closed tight or a maximal hybrid chain; every
// nonempty run of units sits at the root or inside one closed tight.
void count_nodes(const TreeNode& node, bool in_hybrid, std::map<std::string, double>& c) {
  switch (node.label) {
    case NodeLabel::Tight:
      if (node.tight == TightType::TriangleUp) c["SC"] += 1;
      if (node.tight == TightType::NablaDown || node.tight == TightType::Square) c["RC"] += 1;
      if (node.tight == TightType::Circle && !in_hybrid) {
        c["Arc1"] += 1;
        c["Seq2"] += 1;
      }
      break;
    case NodeLabel::Hybrid: {
      const auto circles = std::count_if(node.children.begin(), node.children.end(),
                                         [](const TreeNode& t) { return t.label == NodeLabel::Tight; });
      c["ChainP2"] += static_cast<double>(circles - 1);
      c["Arc1"] += 1;
      c["Seq2"] += 1;
      break;
    }
    case NodeLabel::ClosedSegment: c["Qb"] += 1; break;
    default: break;
  }
  for (const auto& child : node.children) count_nodes(child, node.label == NodeLabel::Hybrid, c);
}

void track(GateResult& g, double dev, double tol, const std::string& where) {
  if (!(dev <= tol) && g.pass) {
    g.pass = false;
    g.detail = where;
  }
  if (std::isnan(dev) || dev > g.max_dev) g.max_dev = dev;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::fabs(a[k] - b[k]));
  return d;
}

struct Weighted {
  std::vector<double> w;  ///< Boltzmann weight per model
  std::array<double, 6> counts{};
};

// Finds the subclass whose productions, scaled by one common factor,
// turn the oracle ensemble into the DP result.
std::string diagnose(const std::vector<Weighted>& ens, size_t k, const FoldResult& res) {
  std::string best = "unattributed";
  double best_dev = 1e-6;
  for (size_t u = 0; u < kSubclasses.size(); ++u) {
    auto z_at = [&](double loglam) {
      double z = 0;
      for (const auto& e : ens) z += e.w[k] * std::exp(loglam * e.counts[u]);
      return z;
    };
    double lo = -20, hi = 20;
    if ((z_at(lo) - res.q) * (z_at(hi) - res.q) > 0) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((z_at(mid) < res.q) == (z_at(hi) > z_at(lo))) lo = mid; else hi = mid;
    }
    const double loglam = 0.5 * (lo + hi);
    const double z = z_at(loglam);
    double dev = 0;
    for (size_t v = 0; v < kSubclasses.size(); ++v) {
      double ex = 0;
      for (const auto& e : ens) ex += e.w[k] * std::exp(loglam * e.counts[u]) / z * e.counts[v];
      dev = std::max(dev, std::fabs(ex - res.subclass_usage.at(kSubclasses[v])));
    }
    if (dev < best_dev) {
      best_dev = dev;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4g", std::exp(loglam));
      best = "subclass " + kSubclasses[u] + " scaled by " + buf;
    }
  }
  return best;
}

}  // namespace

EnergyModel random_model(std::mt19937_64& rng, int theta) {
  const double kT = kDefaultKT;
  std::uniform_real_distribution<double> u(-2 * kT, 2 * kT);
  EnergyParams p;
  p.theta = theta;
  p.alpha1 = u(rng);
  p.alpha2 = u(rng);
  p.alpha3 = u(rng);
  p.beta1 = u(rng);
  p.beta2 = u(rng);
  p.beta3 = u(rng);
  p.sigma0 = u(rng);
  p.sigma = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
  p.gamma = u(rng);
  p.hybrid_pair = u(rng);
  EnergyModel m(p);
  const std::uint64_t hs = rng(), is = rng(), gs = rng();
  auto draw = [kT](std::uint64_t h) { return (4 * unit_interval(h) - 2) * kT; };
  m.hairpin_override = [=](StrandId x, int i, int j) {
    return draw(mix(mix(mix(hs, static_cast<std::uint64_t>(x)), static_cast<std::uint64_t>(i)),
                    static_cast<std::uint64_t>(j)));
  };
  m.interior_override = [=](StrandId x, int i, int j, int k, int l) {
    std::uint64_t h = mix(is, static_cast<std::uint64_t>(x));
    for (int v : {i, j, k, l}) h = mix(h, static_cast<std::uint64_t>(v));
    return draw(h);
  };
  m.gap_override = [=](int a, int b) {
    return draw(mix(mix(gs, static_cast<std::uint64_t>(a)), static_cast<std::uint64_t>(b)));
  };
  return m;
}

std::string random_bases(std::mt19937_64& rng, int length) {
  static const char kBases[] = "ACGU";
  std::string s;
  for (int k = 0; k < length; ++k) s.push_back(kBases[rng() % 4]);
  return s;
}

std::map<std::string, double> subclass_counts(const DecompositionTree& tree) {
  std::map<std::string, double> c;
  for (const auto& name : kSubclasses) c[name] = 0;
  count_nodes(tree.root, false, c);
  if (c["Arc1"] > 0) c["Seq2"] -= 1;
  return c;
}

bool VerifyReport::pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const GateResult& g) { return g.pass; });
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  char buf[64];
  for (const auto& g : gates) {
    if (g.name == "diagnosis") {
      os << "FAIL diagnosis  " << g.detail << '\n';
      continue;
    }
    std::snprintf(buf, sizeof buf, "%.3e", g.max_dev);
    os << (g.pass ? "PASS " : "FAIL ") << g.name << "  max_dev=" << buf;
    if (!g.pass) os << "  at " << g.detail;
    os << '\n';
  }
  os << (pass() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

VerifyReport verify(const VerifyOptions& opt) {
  if (opt.max_n < 0 || opt.max_m < 0 || opt.theta < 0 || opt.random_models < 0) {
    throw UsageError("verify: sizes, theta and model count must be nonnegative");
  }
  std::mt19937_64 rng(opt.seed);
  auto gate = [](std::string name) {
    GateResult g;
    g.name = std::move(name);
    return g;
  };
  GateResult counts = gate("count"), qrel = gate("partition"), bpp = gate("bpp"), suspect = gate("diagnosis");
  std::vector<GateResult> usage;
  for (const auto& name : kSubclasses) usage.push_back(gate("usage " + name));
  FoldOptions fo;
  fo.corrupt = opt.corrupt;

  for (int n = 0; n <= opt.max_n; ++n) {
    for (int m = 0; m <= opt.max_m; ++m) {
      const std::string cell = "n=" + std::to_string(n) + " m=" + std::to_string(m);
      EnumConfig cfg{n, m, {opt.theta, PairPolicy::Any, true}};
      const auto oracle_count = count(cfg);
      const auto dp_count = count_dp(n, m, opt.theta);
      track(counts, std::fabs(static_cast<double>(dp_count) - static_cast<double>(oracle_count)), 0.0, cell);

      const Strand r(StrandId::R, random_bases(rng, n));
      const Strand s(StrandId::S, random_bases(rng, m));
      std::vector<EnergyModel> models{EnergyModel::unit_weight(opt.theta)};
      for (int k = 0; k < opt.random_models; ++k) models.push_back(random_model(rng, opt.theta));

      const auto zs = brute_partition(cfg, r, s, models);
      const auto bs = brute_bpp(cfg, r, s, models);
      std::vector<std::map<std::string, double>> expect(models.size());
      std::vector<Weighted> ensemble;
      enumerate(cfg, r, s, [&](const JointStructure& js) {
        Weighted e;
        const auto c = subclass_counts(decompose(js));
        for (size_t u = 0; u < kSubclasses.size(); ++u) e.counts[u] = c.at(kSubclasses[u]);
        for (size_t k = 0; k < models.size(); ++k) {
          const double w = boltzmann(js, models[k]);
          e.w.push_back(w);
          for (const auto& [name, v] : c) expect[k][name] += w / zs[k] * v;
        }
        ensemble.push_back(std::move(e));
      });

      for (size_t k = 0; k < models.size(); ++k) {
        const std::string where = cell + " model=" + std::to_string(k);
        const auto res = fold(r, s, models[k], fo);
        track(qrel, std::fabs(res.q - zs[k]) / zs[k], opt.tolerance, where);
        if (!qrel.pass && suspect.detail.empty()) {
          suspect.pass = false;
          suspect.detail = diagnose(ensemble, k, res) + " (" + where + ")";
        }
        const auto& b = *res.bpp;
        double d = 0;
        d = std::max(d, max_abs_diff(b.rr, bs[k].rr));
        d = std::max(d, max_abs_diff(b.ss, bs[k].ss));
        d = std::max(d, max_abs_diff(b.rs, bs[k].rs));
        d = std::max(d, max_abs_diff(b.unpaired_r, bs[k].unpaired_r));
        d = std::max(d, max_abs_diff(b.unpaired_s, bs[k].unpaired_s));
        track(bpp, d, opt.tolerance, where);
        for (size_t u = 0; u < kSubclasses.size(); ++u) {
          const auto& name = kSubclasses[u];
          track(usage[u], std::fabs(res.subclass_usage.at(name) - expect[k][name]), opt.tolerance, where);
        }
      }
    }
  }
  VerifyReport rep;
  rep.gates = {counts, qrel, bpp};
  rep.gates.insert(rep.gates.end(), usage.begin(), usage.end());
  if (!suspect.pass) rep.gates.push_back(suspect);
  return rep;
}

}  // namespace rip
