// Copyright 2026 The hdlabel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "hdlabel/hdlabel.h"
#include "test_util.hpp"

namespace {

// Two tight clusters around e_0 and e_1 with two labeled points each.
struct Fixture {
  hdl_embeddings* labeled = nullptr;
  hdl_labels* labels = nullptr;
  hdl_embeddings* unlabeled = nullptr;

  Fixture() {
    const float l[] = {1, 0.01f, 1, 0.02f, 0.01f, 1, 0.02f, 1};
    const int32_t y[] = {0, 0, 1, 1};
    const float u[] = {1, 0.015f, 0.015f, 1, 1, 0.03f};
    REQUIRE(hdl_embeddings_from_buffer(l, 4, 2, &labeled) == HDL_OK);
    REQUIRE(hdl_labels_from_buffer(y, 4, 2, &labels) == HDL_OK);
    REQUIRE(hdl_embeddings_from_buffer(u, 3, 2, &unlabeled) == HDL_OK);
  }
  ~Fixture() {
    hdl_embeddings_free(labeled);
    hdl_labels_free(labels);
    hdl_embeddings_free(unlabeled);
  }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(hdl_version()) == "1.0.0");
  CHECK(std::string(hdl_status_name(HDL_OK)) == "Ok");
  CHECK(std::string(hdl_status_name(HDL_ERR_K_TOO_LARGE)) == "KTooLarge");
  CHECK(std::string(hdl_status_name(HDL_ERR_ZERO_NORM_ROW)) == "ZeroNormRow");
}

TEST_CASE("embedding and label handles") {
  testutil::TempDir dir;
  Fixture f;
  CHECK(hdl_embeddings_count(f.labeled) == 4);
  CHECK(hdl_embeddings_dim(f.labeled) == 2);
  CHECK(hdl_labels_count(f.labels) == 4);
  CHECK(hdl_labels_num_classes(f.labels) == 2);
  CHECK(hdl_labels_get(f.labels, 2) == 1);

  const std::string emb = dir.File("l.emb"), csv = dir.File("l.csv");
  REQUIRE(hdl_embeddings_save(f.labeled, emb.c_str()) == HDL_OK);
  REQUIRE(hdl_labels_save(f.labels, csv.c_str()) == HDL_OK);
  CHECK(testutil::ReadFile(csv) == "index,label\n0,0\n1,0\n2,1\n3,1\n");
  hdl_embeddings* back = nullptr;
  REQUIRE(hdl_embeddings_load(emb.c_str(), &back) == HDL_OK);
  CHECK(hdl_embeddings_count(back) == 4);
  hdl_embeddings_free(back);
  hdl_labels* lab = nullptr;
  REQUIRE(hdl_labels_load(csv.c_str(), 4, 0, &lab) == HDL_OK);
  CHECK(hdl_labels_num_classes(lab) == 2);
  hdl_labels_free(lab);
  CHECK(hdl_labels_load(csv.c_str(), 5, 0, &lab) == HDL_ERR_COUNT_MISMATCH);

  hdl_embeddings_free(nullptr);
  hdl_labels_free(nullptr);
  hdl_output_free(nullptr);
}

TEST_CASE("errors map to status codes with a message") {
  hdl_embeddings* e = nullptr;
  const float zero[] = {0, 0};
  CHECK(hdl_embeddings_from_buffer(zero, 1, 2, &e) == HDL_ERR_ZERO_NORM_ROW);
  CHECK(std::strlen(hdl_last_error()) > 0);
  CHECK(e == nullptr);
  CHECK(hdl_embeddings_load("/nonexistent/x.emb", &e) == HDL_ERR_IO_FAILURE);
  CHECK(hdl_embeddings_from_buffer(nullptr, 1, 2, &e) == HDL_ERR_INVALID_ARGUMENT);
  const int32_t bad[] = {0, 3};
  hdl_labels* l = nullptr;
  CHECK(hdl_labels_from_buffer(bad, 2, 2, &l) == HDL_ERR_LABEL_OUT_OF_RANGE);
  double v = 0;
  CHECK(hdl_reg_inc_beta(1, 1, 2.0, &v) == HDL_ERR_DOMAIN);
  CHECK(hdl_reg_inc_beta(1, 1, 0.85, &v) == HDL_OK);
  CHECK(v == 0.85);
  CHECK(std::string(hdl_last_error()).empty());
}

TEST_CASE("labeling through the C API") {
  Fixture f;
  for (hdl_method method : {HDL_METHOD_HDL, HDL_METHOD_KNN_DV}) {
    hdl_label_options opt{method, 2, HDL_METRIC_COSINE, 1};
    hdl_output* out = nullptr;
    REQUIRE(hdl_label(f.labeled, f.labels, f.unlabeled, &opt, &out) == HDL_OK);
    REQUIRE(hdl_output_count(out) == 3);
    std::vector<int32_t> by_index(3, -1);
    for (uint64_t i = 0; i < 3; ++i) {
      hdl_record r{};
      REQUIRE(hdl_output_record(out, i, &r) == HDL_OK);
      by_index[r.index] = r.label;
    }
    CHECK(by_index == std::vector<int32_t>{0, 1, 0});
    hdl_record r{};
    CHECK(hdl_output_record(out, 3, &r) == HDL_ERR_INVALID_ARGUMENT);
    if (method == HDL_METHOD_KNN_DV) CHECK(hdl_output_level_count(out) == 1);

    testutil::TempDir dir;
    const std::string path = dir.File("out.csv");
    REQUIRE(hdl_output_write(out, path.c_str()) == HDL_OK);
    hdl_output* back = nullptr;
    REQUIRE(hdl_output_load(path.c_str(), &back) == HDL_OK);
    CHECK(hdl_output_count(back) == 3);
    CHECK(hdl_output_level_count(back) == hdl_output_level_count(out));
    hdl_output_free(back);
    hdl_output_free(out);
  }
  hdl_label_options opt{HDL_METHOD_HDL, 7, HDL_METRIC_COSINE, 1};
  hdl_output* out = nullptr;
  CHECK(hdl_label(f.labeled, f.labels, f.unlabeled, &opt, &out) == HDL_ERR_K_TOO_LARGE);
  opt.k = 0;
  CHECK(hdl_label(f.labeled, f.labels, f.unlabeled, &opt, &out) == HDL_ERR_INVALID_ARGUMENT);
  opt.k = 1;
  opt.method = static_cast<hdl_method>(9);
  CHECK(hdl_label(f.labeled, f.labels, f.unlabeled, &opt, &out) == HDL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("adaptive k through the C API") {
  hdl_k_params p;
  hdl_k_params_default(&p);
  CHECK(p.sample_fraction == 0.1);
  CHECK(p.error_rate == 0.15);
  CHECK(p.k_upper_limit == 20);
  CHECK(p.with_replacement == 1);

  // Four clusters of four identical points.
  std::vector<float> data;
  std::vector<int32_t> y;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) data.push_back(j == c ? 1.0f : 0.0f);
      y.push_back(c);
    }
  hdl_embeddings* e = nullptr;
  hdl_labels* l = nullptr;
  REQUIRE(hdl_embeddings_from_buffer(data.data(), 16, 4, &e) == HDL_OK);
  REQUIRE(hdl_labels_from_buffer(y.data(), 16, 4, &l) == HDL_OK);
  p.sample_fraction = 0.5;
  p.k_upper_limit = 10;
  double mu = 0;
  REQUIRE(hdl_estimate_mu(e, l, 3, &p, &mu) == HDL_OK);
  CHECK(mu == 1.0);
  hdl_k_report* report = nullptr;
  REQUIRE(hdl_select_k(e, l, &p, &report) == HDL_OK);
  CHECK(hdl_k_report_chosen(report) == 2);
  CHECK(hdl_k_report_count(report) == 9);
  uint64_t k = 0;
  double m = 0, b = 0, prod = 0;
  REQUIRE(hdl_k_report_candidate(report, 1, &k, &m, &b, &prod) == HDL_OK);
  CHECK(k == 2);
  CHECK(prod == doctest::Approx(0.93925));
  size_t needed = 0;
  REQUIRE(hdl_k_report_format(report, nullptr, 0, &needed) == HDL_OK);
  std::string text(needed + 1, '\0');
  REQUIRE(hdl_k_report_format(report, text.data(), text.size(), &needed) == HDL_OK);
  text.resize(needed);
  CHECK(text.rfind("k,mu,beta,product\n", 0) == 0);
  CHECK(text.substr(text.size() - 9) == "chosen,2\n");
  hdl_k_report_free(report);
  p.k_upper_limit = 20;
  CHECK(hdl_select_k(e, l, &p, &report) == HDL_ERR_K_TOO_LARGE);
  hdl_embeddings_free(e);
  hdl_labels_free(l);
}

TEST_CASE("synthetic data and evaluation through the C API") {
  uint64_t counts[3] = {};
  REQUIRE(hdl_synth_long_tail_counts(500, 3, 100.0, counts) == HDL_OK);
  CHECK(counts[0] == 500);
  CHECK(counts[1] == 50);
  CHECK(counts[2] == 5);

  const uint64_t per_class[] = {20, 20, 20};
  hdl_synth_spec spec{3, 3, per_class, 1.0, 0.0, 0.5, 4};
  hdl_embeddings *le = nullptr, *ue = nullptr;
  hdl_labels *ll = nullptr, *truth = nullptr;
  double imbalance = 0;
  REQUIRE(hdl_synth_generate(&spec, &le, &ll, &ue, &truth, &imbalance) == HDL_OK);
  CHECK(imbalance == 1.0);
  CHECK(hdl_embeddings_count(le) == 30);
  CHECK(hdl_embeddings_count(ue) == 30);
  hdl_label_options opt{HDL_METHOD_HDL, 3, HDL_METRIC_COSINE, 2};
  hdl_output* out = nullptr;
  REQUIRE(hdl_label(le, ll, ue, &opt, &out) == HDL_OK);
  hdl_eval* ev = nullptr;
  REQUIRE(hdl_evaluate(out, truth, "hdl", &ev) == HDL_OK);
  CHECK(hdl_eval_accuracy(ev) == 1.0);
  size_t needed = 0;
  char small[8];
  REQUIRE(hdl_eval_format_json(ev, small, sizeof small, &needed) == HDL_OK);
  CHECK(needed > sizeof small);
  CHECK(std::strlen(small) == sizeof small - 1);
  hdl_eval_free(ev);
  CHECK(hdl_evaluate(out, ll, "hdl", &ev) == HDL_OK);  // same size, labels differ
  hdl_eval_free(ev);
  hdl_output_free(out);

  spec.dim = 2;
  hdl_embeddings *a = nullptr, *c = nullptr;
  hdl_labels *b = nullptr, *d = nullptr;
  CHECK(hdl_synth_generate(&spec, &a, &b, &c, &d, &imbalance) == HDL_ERR_INVALID_SPEC);
  hdl_embeddings_free(le);
  hdl_embeddings_free(ue);
  hdl_labels_free(ll);
  hdl_labels_free(truth);
}
