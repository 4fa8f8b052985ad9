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

#include "hdlabel/hdlabel.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "hdlabel/adaptive_k.hpp"
#include "hdlabel/embedding_store.hpp"
#include "hdlabel/error.hpp"
#include "hdlabel/hdl_core.hpp"
#include "hdlabel/knn_dv.hpp"
#include "hdlabel/synth_eval.hpp"

struct hdl_embeddings {
  hdlabel::EmbeddingSet set;
};
struct hdl_labels {
  hdlabel::LabelVector labels;
};
struct hdl_output {
  hdlabel::LabeledOutput records;  // (level, rank) order
  std::size_t levels = 0;
};
struct hdl_k_report {
  hdlabel::KSelectionReport report;
};
struct hdl_eval {
  hdlabel::EvalResult result;
};

namespace {

thread_local std::string g_last_error;

void SetError(const char* what) { g_last_error = what; }

template <typename Fn>
hdl_status Guard(Fn&& fn) noexcept {
  try {
    SetError("");
    fn();
    return HDL_OK;
  } catch (const hdlabel::Error& e) {
    SetError(e.what());
    return static_cast<hdl_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    SetError("out of memory");
    return HDL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    SetError(e.what());
    return HDL_ERR_INTERNAL;
  } catch (...) {
    SetError("unknown exception");
    return HDL_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw hdlabel::Error(hdlabel::ErrorCode::kInvalidArgument, what);
}

hdlabel::Metric ToMetric(hdl_metric m) {
  switch (m) {
    case HDL_METRIC_COSINE: return hdlabel::Metric::kCosine;
    case HDL_METRIC_EUCLIDEAN: return hdlabel::Metric::kEuclidean;
  }
  throw hdlabel::Error(hdlabel::ErrorCode::kInvalidArgument, "unknown metric");
}

hdl_output* MakeOutput(hdlabel::LabeledOutput records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.level != b.level ? a.level < b.level : a.rank < b.rank;
  });
  auto* out = new hdl_output{std::move(records), 0};
  if (!out->records.empty()) out->levels = out->records.back().level + 1;
  return out;
}

void CopyString(const std::string& s, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size();
  if (buffer && capacity > 0) {
    const size_t n = std::min(capacity - 1, s.size());
    std::memcpy(buffer, s.data(), n);
    buffer[n] = '\0';
  }
}

hdlabel::KSelectionParams ToParams(const hdl_k_params& p) {
  hdlabel::KSelectionParams params;
  params.sample_fraction = p.sample_fraction;
  params.error_rate = p.error_rate;
  params.k_upper_limit = p.k_upper_limit;
  params.seed = p.seed;
  params.with_replacement = p.with_replacement != 0;
  params.metric = ToMetric(p.metric);
  params.threads = p.threads;
  return params;
}

}  // namespace

extern "C" {

const char* hdl_version(void) { return "1.0.0"; }

const char* hdl_status_name(hdl_status status) {
  if (status == HDL_OK) return "Ok";
  return hdlabel::ErrorCodeName(static_cast<hdlabel::ErrorCode>(status));
}

const char* hdl_last_error(void) { return g_last_error.c_str(); }

hdl_status hdl_embeddings_load(const char* path, hdl_embeddings** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = new hdl_embeddings{hdlabel::LoadEmbeddings(path)};
  });
}

hdl_status hdl_embeddings_from_buffer(const float* data, uint64_t count, uint32_t dim,
                                      hdl_embeddings** out) {
  return Guard([&] {
    Require(out && (data || count == 0), "null argument");
    std::vector<float> values(data, data + count * dim);
    *out = new hdl_embeddings{hdlabel::EmbeddingSet(dim, std::move(values))};
  });
}

hdl_status hdl_embeddings_save(const hdl_embeddings* set, const char* path) {
  return Guard([&] {
    Require(set && path, "null argument");
    hdlabel::SaveEmbeddings(set->set, path);
  });
}

uint64_t hdl_embeddings_count(const hdl_embeddings* set) { return set ? set->set.count() : 0; }
uint32_t hdl_embeddings_dim(const hdl_embeddings* set) {
  return set ? static_cast<uint32_t>(set->set.dim()) : 0;
}
void hdl_embeddings_free(hdl_embeddings* set) { delete set; }

hdl_status hdl_labels_load(const char* path, uint64_t expected_count, int32_t num_classes,
                           hdl_labels** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    std::optional<int> classes;
    if (num_classes > 0) classes = num_classes;
    *out = new hdl_labels{hdlabel::LoadLabels(path, expected_count, classes)};
  });
}

hdl_status hdl_labels_from_buffer(const int32_t* labels, uint64_t count, int32_t num_classes,
                                  hdl_labels** out) {
  return Guard([&] {
    Require(out && (labels || count == 0), "null argument");
    std::vector<hdlabel::ClassId> values(labels, labels + count);
    int classes = num_classes;
    if (classes <= 0) {
      classes = 0;
      for (auto v : values) classes = std::max(classes, v + 1);
    }
    *out = new hdl_labels{hdlabel::LabelVector(std::move(values), classes)};
  });
}

hdl_status hdl_labels_save(const hdl_labels* labels, const char* path) {
  return Guard([&] {
    Require(labels && path, "null argument");
    hdlabel::SaveLabels(labels->labels, path);
  });
}

uint64_t hdl_labels_count(const hdl_labels* labels) { return labels ? labels->labels.size() : 0; }
int32_t hdl_labels_num_classes(const hdl_labels* labels) {
  return labels ? labels->labels.num_classes() : 0;
}
int32_t hdl_labels_get(const hdl_labels* labels, uint64_t i) {
  if (!labels || i >= labels->labels.size()) return -1;
  return labels->labels[i];
}
void hdl_labels_free(hdl_labels* labels) { delete labels; }

hdl_status hdl_label(const hdl_embeddings* labeled, const hdl_labels* labels,
                     const hdl_embeddings* unlabeled, const hdl_label_options* options,
                     hdl_output** out) {
  return Guard([&] {
    Require(labeled && labels && unlabeled && options && out, "null argument");
    const auto metric = ToMetric(options->metric);
    if (options->method == HDL_METHOD_KNN_DV) {
      auto records = hdlabel::RunKnnDv(labeled->set, labels->labels, unlabeled->set,
                                       options->k, metric, options->threads);
      *out = MakeOutput(std::move(records));
    } else if (options->method == HDL_METHOD_HDL) {
      hdlabel::HdlOptions hdl_options;
      hdl_options.threads = options->threads;
      auto result = hdlabel::RunHdl(labeled->set, labels->labels, unlabeled->set, options->k,
                                    metric, hdl_options);
      *out = MakeOutput(std::move(result.output));
    } else {
      Require(false, "unknown labeling method");
    }
  });
}

uint64_t hdl_output_count(const hdl_output* output) { return output ? output->records.size() : 0; }
uint64_t hdl_output_level_count(const hdl_output* output) { return output ? output->levels : 0; }

hdl_status hdl_output_record(const hdl_output* output, uint64_t i, hdl_record* out) {
  return Guard([&] {
    Require(output && out, "null argument");
    Require(i < output->records.size(), "record index out of range");
    const auto& r = output->records[i];
    *out = hdl_record{r.index, r.label, r.level, r.rank, r.margin, r.tied ? 1 : 0};
  });
}

hdl_status hdl_output_write(const hdl_output* output, const char* path) {
  return Guard([&] {
    Require(output && path, "null argument");
    hdlabel::WriteOutput(output->records, path);
  });
}

hdl_status hdl_output_load(const char* path, hdl_output** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    *out = MakeOutput(hdlabel::ReadOutput(path));
  });
}

void hdl_output_free(hdl_output* output) { delete output; }

void hdl_k_params_default(hdl_k_params* params) {
  if (!params) return;
  *params = hdl_k_params{0.1, 0.15, 20, 0, 1, HDL_METRIC_COSINE, 1};
}

hdl_status hdl_reg_inc_beta(int64_t a, int64_t b, double x, double* out) {
  return Guard([&] {
    Require(out, "null argument");
    *out = hdlabel::RegIncBeta(a, b, x);
  });
}

hdl_status hdl_beta_factor(uint64_t k, double error_rate, double* out) {
  return Guard([&] {
    Require(out, "null argument");
    *out = hdlabel::BetaFactor(k, error_rate);
  });
}

hdl_status hdl_estimate_mu(const hdl_embeddings* labeled, const hdl_labels* labels,
                           uint64_t k, const hdl_k_params* params, double* out_mu) {
  return Guard([&] {
    Require(labeled && labels && params && out_mu, "null argument");
    hdlabel::MuOptions options;
    options.sample_fraction = params->sample_fraction;
    options.seed = params->seed;
    options.with_replacement = params->with_replacement != 0;
    options.metric = ToMetric(params->metric);
    options.threads = params->threads;
    *out_mu = hdlabel::EstimateMu(labeled->set, labels->labels, k, options);
  });
}

hdl_status hdl_select_k(const hdl_embeddings* labeled, const hdl_labels* labels,
                        const hdl_k_params* params, hdl_k_report** out) {
  return Guard([&] {
    Require(labeled && labels && params && out, "null argument");
    *out = new hdl_k_report{hdlabel::SelectK(labeled->set, labels->labels, ToParams(*params))};
  });
}

uint64_t hdl_k_report_chosen(const hdl_k_report* report) {
  return report ? report->report.chosen_k : 0;
}
uint64_t hdl_k_report_count(const hdl_k_report* report) {
  return report ? report->report.candidates.size() : 0;
}

hdl_status hdl_k_report_candidate(const hdl_k_report* report, uint64_t i, uint64_t* k,
                                  double* mu, double* beta, double* product) {
  return Guard([&] {
    Require(report, "null argument");
    Require(i < report->report.candidates.size(), "candidate index out of range");
    const auto& c = report->report.candidates[i];
    if (k) *k = c.k;
    if (mu) *mu = c.mu;
    if (beta) *beta = c.beta;
    if (product) *product = c.product;
  });
}

hdl_status hdl_k_report_format(const hdl_k_report* report, char* buffer, size_t capacity,
                               size_t* needed) {
  return Guard([&] {
    Require(report, "null argument");
    CopyString(hdlabel::FormatKReport(report->report), buffer, capacity, needed);
  });
}

void hdl_k_report_free(hdl_k_report* report) { delete report; }

hdl_status hdl_synth_long_tail_counts(uint64_t max_count, int32_t num_classes,
                                      double imbalance_factor, uint64_t* out_counts) {
  return Guard([&] {
    Require(out_counts, "null argument");
    const auto counts = hdlabel::LongTailCounts(max_count, num_classes, imbalance_factor);
    std::copy(counts.begin(), counts.end(), out_counts);
  });
}

hdl_status hdl_synth_generate(const hdl_synth_spec* spec, hdl_embeddings** labeled,
                              hdl_labels** labels, hdl_embeddings** unlabeled,
                              hdl_labels** truth, double* imbalance_factor) {
  return Guard([&] {
    Require(spec && labeled && labels && unlabeled && truth, "null argument");
    Require(spec->class_counts || spec->num_classes <= 0, "null class_counts");
    hdlabel::SynthSpec s;
    s.num_classes = spec->num_classes;
    s.dim = spec->dim;
    if (spec->num_classes > 0)
      s.class_counts.assign(spec->class_counts, spec->class_counts + spec->num_classes);
    s.radius = spec->radius;
    s.sigma = spec->sigma;
    s.labeled_fraction = spec->labeled_fraction;
    s.seed = spec->seed;
    hdlabel::SynthData data = hdlabel::Generate(s);
    *labeled = new hdl_embeddings{std::move(data.labeled)};
    *labels = new hdl_labels{std::move(data.labels)};
    *unlabeled = new hdl_embeddings{std::move(data.unlabeled)};
    *truth = new hdl_labels{std::move(data.truth)};
    if (imbalance_factor) *imbalance_factor = data.imbalance_factor;
  });
}

hdl_status hdl_evaluate(const hdl_output* output, const hdl_labels* truth, const char* method,
                        hdl_eval** out) {
  return Guard([&] {
    Require(output && truth && out, "null argument");
    *out = new hdl_eval{hdlabel::Evaluate(output->records, truth->labels, method ? method : "")};
  });
}

double hdl_eval_accuracy(const hdl_eval* eval) { return eval ? eval->result.accuracy : 0.0; }

hdl_status hdl_eval_format_json(const hdl_eval* eval, char* buffer, size_t capacity,
                                size_t* needed) {
  return Guard([&] {
    Require(eval, "null argument");
    CopyString(hdlabel::EvalToJson(eval->result), buffer, capacity, needed);
  });
}

void hdl_eval_free(hdl_eval* eval) { delete eval; }

}  // extern "C"
