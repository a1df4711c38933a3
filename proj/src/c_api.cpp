#include "rip/rip.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "rip/energy.hpp"
#include "rip/inside.hpp"
#include "rip/model.hpp"
#include "rip/verify.hpp"

struct rip_model {
  rip::EnergyModel model;
};

struct rip_result {
  rip::FoldResult fold;
  int n = 0;
  int m = 0;
};

namespace {

thread_local std::string g_error;

template <class F>
rip_status guard(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const rip::InputError& e) {
    g_error = e.what();
    return RIP_ERR_INPUT;
  } catch (const rip::UsageError& e) {
    g_error = e.what();
    return RIP_ERR_USAGE;
  } catch (const rip::ResourceError& e) {
    g_error = e.what();
    return RIP_ERR_RESOURCE;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return RIP_ERR_RESOURCE;
  } catch (const std::exception& e) {
    g_error = e.what();
    return RIP_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return RIP_ERR_INTERNAL;
  }
}

rip_status usage(const char* msg) {
  g_error = msg;
  return RIP_ERR_USAGE;
}

}  // namespace

extern "C" {

rip_status rip_model_create(rip_model** out) {
  if (!out) return usage("null output pointer");
  return guard([&] {
    *out = new rip_model{rip::EnergyModel::unit_weight()};
    return RIP_OK;
  });
}

rip_status rip_model_load(const char* path, rip_model** out) {
  if (!path || !out) return usage("null argument");
  return guard([&] {
    *out = new rip_model{rip::EnergyModel::load(path)};
    return RIP_OK;
  });
}

rip_status rip_model_parse(const char* text, rip_model** out) {
  if (!text || !out) return usage("null argument");
  return guard([&] {
    *out = new rip_model{rip::EnergyModel::parse(text)};
    return RIP_OK;
  });
}

rip_status rip_model_set(rip_model* model, const char* key, const char* value) {
  if (!model || !key || !value) return usage("null argument");
  return guard([&] {
    rip::EnergyModel copy = model->model;
    copy.set(key, value);
    copy.check();
    model->model = std::move(copy);
    return RIP_OK;
  });
}

double rip_model_kt(const rip_model* model) { return model ? model->model.params().kT : 0.0; }

void rip_model_destroy(rip_model* model) { delete model; }

rip_status rip_fold(const rip_model* model, const char* seq_r, const char* seq_s, unsigned flags,
                    rip_result** out) {
  if (!model || !seq_r || !seq_s || !out) return usage("null argument");
  return guard([&] {
    const rip::Strand r(rip::StrandId::R, seq_r);
    const rip::Strand s(rip::StrandId::S, seq_s);
    rip::FoldOptions opt;
    opt.parallel = (flags & RIP_FOLD_PARALLEL) != 0;
    opt.outside = (flags & RIP_FOLD_NO_OUTSIDE) == 0;
    auto* res = new rip_result{rip::fold(r, s, model->model, opt), r.length(), s.length()};
    *out = res;
    return RIP_OK;
  });
}

double rip_result_partition(const rip_result* result) { return result ? result->fold.q : 0.0; }
int rip_result_n(const rip_result* result) { return result ? result->n : 0; }
int rip_result_m(const rip_result* result) { return result ? result->m : 0; }

rip_status rip_result_matrix(const rip_result* result, rip_matrix which, const double** data,
                             size_t* rows, size_t* cols) {
  if (!result || !data || !rows || !cols) return usage("null argument");
  if (!result->fold.bpp) return usage("result was computed without pairing probabilities");
  const auto& b = *result->fold.bpp;
  const auto n = static_cast<size_t>(b.n), m = static_cast<size_t>(b.m);
  switch (which) {
    case RIP_MATRIX_RR: *data = b.rr.data(); *rows = n; *cols = n; return RIP_OK;
    case RIP_MATRIX_SS: *data = b.ss.data(); *rows = m; *cols = m; return RIP_OK;
    case RIP_MATRIX_RS: *data = b.rs.data(); *rows = n; *cols = m; return RIP_OK;
  }
  return usage("unknown matrix");
}

rip_status rip_result_unpaired(const rip_result* result, int strand_s, const double** data,
                               size_t* len) {
  if (!result || !data || !len) return usage("null argument");
  if (!result->fold.bpp) return usage("result was computed without pairing probabilities");
  const auto& v = strand_s ? result->fold.bpp->unpaired_s : result->fold.bpp->unpaired_r;
  *data = v.data();
  *len = v.size();
  return RIP_OK;
}

size_t rip_result_table_entries(const rip_result* result) { return result ? result->fold.table_entries : 0; }
size_t rip_result_table_bytes(const rip_result* result) { return result ? result->fold.table_bytes : 0; }

void rip_result_destroy(rip_result* result) { delete result; }

rip_status rip_count(int n, int m, int theta, uint64_t* out) {
  if (!out) return usage("null output pointer");
  if (n < 0 || m < 0 || theta < 0) return usage("lengths and theta must be nonnegative");
  return guard([&] {
    *out = rip::count_dp(n, m, theta);
    return RIP_OK;
  });
}

void rip_verify_defaults(rip_verify_options* opt) {
  if (!opt) return;
  const rip::VerifyOptions d;
  opt->max_n = d.max_n;
  opt->max_m = d.max_m;
  opt->theta = d.theta;
  opt->seed = d.seed;
  opt->random_models = d.random_models;
  opt->corrupt = nullptr;
}

rip_status rip_verify(const rip_verify_options* opt, char** report) {
  if (!opt || !report) return usage("null argument");
  return guard([&] {
    rip::VerifyOptions v;
    v.max_n = opt->max_n;
    v.max_m = opt->max_m;
    v.theta = opt->theta;
    v.seed = opt->seed;
    v.random_models = opt->random_models;
    if (opt->corrupt) v.corrupt = opt->corrupt;
    const auto rep = rip::verify(v);
    const std::string text = rep.text();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *report = buf;
    if (rep.pass()) return RIP_OK;
    g_error = "verification failed";
    return RIP_ERR_VERIFY;
  });
}

void rip_string_free(char* s) { std::free(s); }

const char* rip_last_error(void) { return g_error.c_str(); }

}
