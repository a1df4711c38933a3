#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rip/rip.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kResource = 3, kVerify = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(rip_status s) {
  switch (s) {
    case RIP_OK: return kOk;
    case RIP_ERR_USAGE: return kUsage;
    case RIP_ERR_INPUT: return kInput;
    case RIP_ERR_RESOURCE: return kResource;
    default: return kVerify;
  }
}

void check(rip_status s) {
  if (s != RIP_OK) throw Failure{exit_code(s), rip_last_error()};
}

using ModelPtr = std::unique_ptr<rip_model, decltype(&rip_model_destroy)>;
using ResultPtr = std::unique_ptr<rip_result, decltype(&rip_result_destroy)>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// A path to a sequence file, or the sequence itself.
std::string read_sequence(const std::string& arg) {
  std::string text;
  if (fs::is_regular_file(arg)) {
    std::ifstream in(arg);
    if (!in) throw Failure{kInput, "cannot read " + arg};
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else if (!arg.empty() && std::all_of(arg.begin(), arg.end(), [](unsigned char c) { return std::isalpha(c); })) {
    text = arg;
  } else {
    throw Failure{kInput, "cannot read sequence file " + arg};
  }
  std::istringstream lines(text);
  std::string line, seq;
  bool first = true;
  while (std::getline(lines, line)) {
    if (first && !line.empty() && line[0] == '>') {
      first = false;
      continue;
    }
    first = false;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) seq.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return seq;
}

std::string tsv(const double* data, const std::string& row_label_seq, const std::string& col_label_seq) {
  std::string out;
  for (size_t c = 0; c < col_label_seq.size(); ++c) out += '\t' + std::to_string(c + 1) + ':' + col_label_seq[c];
  out += '\n';
  for (size_t r = 0; r < row_label_seq.size(); ++r) {
    out += std::to_string(r + 1) + ':' + row_label_seq[r];
    for (size_t c = 0; c < col_label_seq.size(); ++c) out += '\t' + fmt(data[r * col_label_seq.size() + c]);
    out += '\n';
  }
  return out;
}

char dot(double p) {
  if (p < 0.01) return ' ';
  if (p < 0.1) return '.';
  if (p < 0.5) return 'o';
  return 'O';
}

struct FoldArgs {
  std::string seq1, seq2, params, out = ".", policy;
  int theta = -1;
  bool unit_weights = false;
  bool parallel = false;
};

int cmd_fold(const FoldArgs& a) {
  const std::string r = read_sequence(a.seq1);
  std::string s = read_sequence(a.seq2);
  std::reverse(s.begin(), s.end());

  rip_model* raw = nullptr;
  if (a.unit_weights || a.params.empty()) {
    check(rip_model_create(&raw));
  } else {
    if (!fs::is_regular_file(a.params)) throw Failure{kInput, "cannot read parameter file " + a.params};
    check(rip_model_load(a.params.c_str(), &raw));
  }
  ModelPtr model(raw, rip_model_destroy);
  if (a.theta >= 0) check(rip_model_set(model.get(), "theta", std::to_string(a.theta).c_str()));
  if (!a.policy.empty()) check(rip_model_set(model.get(), "pair_policy", a.policy.c_str()));

  rip_result* res_raw = nullptr;
  check(rip_fold(model.get(), r.c_str(), s.c_str(), a.parallel ? RIP_FOLD_PARALLEL : 0u, &res_raw));
  ResultPtr res(res_raw, rip_result_destroy);

  const double q = rip_result_partition(res.get());
  std::map<std::string, std::string> files;
  files["partition.txt"] = "Q\t" + fmt(q) + "\nfree_energy\t" + fmt(-rip_model_kt(model.get()) * std::log(q)) + "\n";
  const double* data = nullptr;
  size_t rows = 0, cols = 0;
  check(rip_result_matrix(res.get(), RIP_MATRIX_RR, &data, &rows, &cols));
  files["bpp_rr.tsv"] = tsv(data, r, r);
  check(rip_result_matrix(res.get(), RIP_MATRIX_SS, &data, &rows, &cols));
  files["bpp_ss.tsv"] = tsv(data, s, s);
  check(rip_result_matrix(res.get(), RIP_MATRIX_RS, &data, &rows, &cols));
  files["bpp_rs.tsv"] = tsv(data, r, s);
  std::string plot;
  for (size_t i = 0; i < rows; ++i) {
    for (size_t h = 0; h < cols; ++h) plot += dot(data[i * cols + h]);
    plot += '\n';
  }
  files["dotplot.txt"] = plot;

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw Failure{kInput, "cannot create output directory " + a.out};
  for (const auto& [name, body] : files) {
    const fs::path tmp = fs::path(a.out) / (name + ".tmp");
    std::ofstream f(tmp, std::ios::binary);
    f << body;
    if (!f) throw Failure{kInput, "cannot write " + tmp.string()};
  }
  for (const auto& [name, body] : files) fs::rename(fs::path(a.out) / (name + ".tmp"), fs::path(a.out) / name);
  std::cout << "Q = " << fmt(q) << '\n';
  return kOk;
}

int cmd_count(int n, int m, int theta, int cap) {
  if (n > cap || m > cap) {
    throw Failure{kResource, "length exceeds the cap of " + std::to_string(cap)};
  }
  std::cout << "n\tm\tcount\n";
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= m; ++b) {
      uint64_t c = 0;
      check(rip_count(a, b, theta, &c));
      std::cout << a << '\t' << b << '\t' << c << '\n';
    }
  }
  return kOk;
}

int run_verify(const rip_verify_options& opt) {
  char* report = nullptr;
  const rip_status st = rip_verify(&opt, &report);
  if (report) {
    std::cout << report;
    rip_string_free(report);
  }
  if (st == RIP_ERR_VERIFY) return kVerify;
  check(st);
  return kOk;
}

int cmd_selftest() {
  int failures = 0;
  auto expect = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
    if (!ok) ++failures;
  };
  uint64_t c = 0;
  expect(rip_count(1, 1, 3, &c) == RIP_OK && c == 2, "count n=1 m=1 is 2");
  expect(rip_count(5, 0, 3, &c) == RIP_OK && c == 2, "count n=5 m=0 is 2");
  expect(rip_count(0, 0, 3, &c) == RIP_OK && c == 1, "count n=0 m=0 is 1");

  rip_model* raw = nullptr;
  check(rip_model_create(&raw));
  ModelPtr model(raw, rip_model_destroy);
  rip_result* res_raw = nullptr;
  check(rip_fold(model.get(), "A", "U", 0, &res_raw));
  ResultPtr res(res_raw, rip_result_destroy);
  const double* data = nullptr;
  size_t rows = 0, cols = 0;
  check(rip_result_matrix(res.get(), RIP_MATRIX_RS, &data, &rows, &cols));
  expect(std::fabs(rip_result_partition(res.get()) - 2.0) < 1e-12, "fold A/U gives Q = 2");
  expect(std::fabs(data[0] - 0.5) < 1e-12, "fold A/U gives pRS(1,1) = 0.5");

  rip_verify_options opt;
  rip_verify_defaults(&opt);
  opt.max_n = 4;
  opt.max_m = 4;
  char* report = nullptr;
  const rip_status st = rip_verify(&opt, &report);
  rip_string_free(report);
  expect(st == RIP_OK, "oracle gates for n, m <= 4");
  return failures == 0 ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition function and pairing probabilities of two interacting RNA strands"};
  app.require_subcommand(1);

  FoldArgs fa;
  auto* fold = app.add_subcommand("fold", "Fold two strands and write partition.txt, bpp_*.tsv and dotplot.txt");
  fold->add_option("--seq1", fa.seq1, "R sequence file (5'->3') or inline sequence")->required();
  fold->add_option("--seq2", fa.seq2, "S sequence file (5'->3') or inline sequence")->required();
  fold->add_option("--params", fa.params, "Parameter file of 'key = value' lines");
  fold->add_option("--theta", fa.theta, "Minimum hairpin size")->check(CLI::NonNegativeNumber);
  fold->add_option("--policy", fa.policy, "Pairing policy")->check(CLI::IsMember({"any", "canonical"}));
  fold->add_flag("--unit-weights", fa.unit_weights, "Ignore --params and set every energy to zero");
  fold->add_option("--out", fa.out, "Output directory");
  fold->add_flag("--parallel", fa.parallel, "Fill tables with several threads");

  int cn = 0, cm = 0, ctheta = 3, cap = 40;
  auto* count = app.add_subcommand("count", "Count joint structures for every n' <= n and m' <= m");
  count->add_option("--n", cn, "R length")->required()->check(CLI::NonNegativeNumber);
  count->add_option("--m", cm, "S length")->required()->check(CLI::NonNegativeNumber);
  count->add_option("--theta", ctheta, "Minimum hairpin size")->check(CLI::NonNegativeNumber);
  count->add_option("--cap", cap, "Largest accepted length");

  rip_verify_options vopt;
  rip_verify_defaults(&vopt);
  std::string corrupt;
  auto* verify = app.add_subcommand("verify", "Compare the DP against exhaustive enumeration");
  verify->add_option("--max-n", vopt.max_n, "Largest R length")->check(CLI::NonNegativeNumber);
  verify->add_option("--max-m", vopt.max_m, "Largest S length")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", vopt.seed, "Seed for sequences and random models");
  verify->add_option("--theta", vopt.theta, "Minimum hairpin size")->check(CLI::NonNegativeNumber);
  verify->add_option("--models", vopt.random_models, "Random energy models per size")->check(CLI::NonNegativeNumber);
  verify->add_option("--corrupt", corrupt, "Test hook: perturb one grammar subclass")->group("");

  app.add_subcommand("selftest", "Run built-in sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*fold) return cmd_fold(fa);
    if (*count) return cmd_count(cn, cm, ctheta, cap);
    if (*verify) {
      if (!corrupt.empty()) vopt.corrupt = corrupt.c_str();
      return run_verify(vopt);
    }
    return cmd_selftest();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerify;
  }
}
