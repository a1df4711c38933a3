#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "rip/rip.h"

TEST_CASE("model lifecycle and errors") {
  rip_model* m = nullptr;
  REQUIRE(rip_model_create(&m) == RIP_OK);
  CHECK(rip_model_set(m, "theta", "1") == RIP_OK);
  CHECK(rip_model_set(m, "nope", "1") == RIP_ERR_INPUT);
  CHECK(std::string(rip_last_error()).find("nope") != std::string::npos);
  CHECK(rip_model_set(m, "sigma", "2") == RIP_ERR_INPUT);
  CHECK(rip_model_set(nullptr, "theta", "1") == RIP_ERR_USAGE);
  CHECK(rip_model_kt(m) > 0);
  rip_model_destroy(m);

  rip_model* bad = nullptr;
  CHECK(rip_model_load("/nonexistent/params", &bad) == RIP_ERR_INPUT);
  CHECK(bad == nullptr);
  CHECK(rip_model_parse("alpha1 = 0.5\n", &bad) == RIP_OK);
  rip_model_destroy(bad);
}

TEST_CASE("fold through the C interface") {
  rip_model* m = nullptr;
  REQUIRE(rip_model_create(&m) == RIP_OK);
  rip_result* r = nullptr;
  REQUIRE(rip_fold(m, "A", "U", 0, &r) == RIP_OK);
  CHECK(rip_result_partition(r) == 2.0);
  CHECK(rip_result_n(r) == 1);
  CHECK(rip_result_m(r) == 1);
  const double* d = nullptr;
  size_t rows = 0, cols = 0;
  REQUIRE(rip_result_matrix(r, RIP_MATRIX_RS, &d, &rows, &cols) == RIP_OK);
  CHECK(rows == 1);
  CHECK(cols == 1);
  CHECK(d[0] == doctest::Approx(0.5));
  size_t len = 0;
  REQUIRE(rip_result_unpaired(r, 1, &d, &len) == RIP_OK);
  CHECK(len == 1);
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(rip_result_table_entries(r) > 0);
  rip_result_destroy(r);

  CHECK(rip_fold(m, "AXC", "U", 0, &r) == RIP_ERR_INPUT);
  REQUIRE(rip_fold(m, "AC", "GU", RIP_FOLD_NO_OUTSIDE | RIP_FOLD_PARALLEL, &r) == RIP_OK);
  CHECK(rip_result_matrix(r, RIP_MATRIX_RR, &d, &rows, &cols) == RIP_ERR_USAGE);
  rip_result_destroy(r);
  rip_model_destroy(m);
}

TEST_CASE("count and verify through the C interface") {
  uint64_t c = 0;
  CHECK(rip_count(1, 1, 3, &c) == RIP_OK);
  CHECK(c == 2);
  CHECK(rip_count(-1, 1, 3, &c) == RIP_ERR_USAGE);

  rip_verify_options o;
  rip_verify_defaults(&o);
  o.max_n = 3;
  o.max_m = 3;
  char* report = nullptr;
  CHECK(rip_verify(&o, &report) == RIP_OK);
  REQUIRE(report != nullptr);
  CHECK(std::strstr(report, "PASS") != nullptr);
  rip_string_free(report);

  o.corrupt = "Qb";
  report = nullptr;
  CHECK(rip_verify(&o, &report) == RIP_ERR_VERIFY);
  CHECK(std::strstr(report, "subclass Qb") != nullptr);
  rip_string_free(report);
}
