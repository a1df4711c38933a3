#pragma once

#include <vector>

namespace rip {

/// Base-pairing probabilities. Indices are 1-based; pRR and pSS are symmetric.
struct BppMatrices {
  int n = 0;
  int m = 0;
  std::vector<double> rr;  ///< n*n
  std::vector<double> ss;  ///< m*m
  std::vector<double> rs;  ///< n*m
  std::vector<double> unpaired_r;
  std::vector<double> unpaired_s;

  static BppMatrices zeros(int n, int m) {
    BppMatrices b;
    b.n = n;
    b.m = m;
    b.rr.assign(static_cast<size_t>(n * n), 0.0);
    b.ss.assign(static_cast<size_t>(m * m), 0.0);
    b.rs.assign(static_cast<size_t>(n * m), 0.0);
    b.unpaired_r.assign(static_cast<size_t>(n), 0.0);
    b.unpaired_s.assign(static_cast<size_t>(m), 0.0);
    return b;
  }

  double& p_rr(int i, int j) { return rr[static_cast<size_t>((i - 1) * n + (j - 1))]; }
  double& p_ss(int i, int j) { return ss[static_cast<size_t>((i - 1) * m + (j - 1))]; }
  double& p_rs(int i, int h) { return rs[static_cast<size_t>((i - 1) * m + (h - 1))]; }
  double p_rr(int i, int j) const { return rr[static_cast<size_t>((i - 1) * n + (j - 1))]; }
  double p_ss(int i, int j) const { return ss[static_cast<size_t>((i - 1) * m + (j - 1))]; }
  double p_rs(int i, int h) const { return rs[static_cast<size_t>((i - 1) * m + (h - 1))]; }

  /// Recomputes unpaired probabilities as one minus the pairing mass.
  void fill_unpaired() {
    for (int i = 1; i <= n; ++i) {
      double s = 0;
      for (int j = 1; j <= n; ++j) s += p_rr(i, j);
      for (int h = 1; h <= m; ++h) s += p_rs(i, h);
      unpaired_r[static_cast<size_t>(i - 1)] = 1.0 - s;
    }
    for (int h = 1; h <= m; ++h) {
      double s = 0;
      for (int l = 1; l <= m; ++l) s += p_ss(h, l);
      for (int i = 1; i <= n; ++i) s += p_rs(i, h);
      unpaired_s[static_cast<size_t>(h - 1)] = 1.0 - s;
    }
  }
};

}  // namespace rip
