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

/* C interface to the hdlabel engine. Every object is an opaque handle owned
 * by the caller and released with its matching *_free function. Every
 * fallible call returns an hdl_status; on failure a description is available
 * from hdl_last_error() on the same thread until the next failing call. */

#ifndef HDLABEL_HDLABEL_H_
#define HDLABEL_HDLABEL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HDLABEL_BUILDING_LIBRARY)
#    define HDL_API __declspec(dllexport)
#  else
#    define HDL_API __declspec(dllimport)
#  endif
#else
#  define HDL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdl_status {
  HDL_OK = 0,
  HDL_ERR_MALFORMED_FILE = 1,
  HDL_ERR_NON_FINITE_VALUE = 2,
  HDL_ERR_ZERO_NORM_ROW = 3,
  HDL_ERR_COUNT_MISMATCH = 4,
  HDL_ERR_NEGATIVE_LABEL = 5,
  HDL_ERR_NON_INTEGER_LABEL = 6,
  HDL_ERR_LABEL_OUT_OF_RANGE = 7,
  HDL_ERR_IO_FAILURE = 8,
  HDL_ERR_DIM_MISMATCH = 9,
  HDL_ERR_K_TOO_LARGE = 10,
  HDL_ERR_EMPTY_VOTER_SET = 11,
  HDL_ERR_DOMAIN = 12,
  HDL_ERR_EMPTY_SAMPLE = 13,
  HDL_ERR_INVALID_SPEC = 14,
  HDL_ERR_INVALID_ARGUMENT = 15,
  HDL_ERR_INTERNAL = 16
} hdl_status;

typedef enum hdl_metric { HDL_METRIC_COSINE = 0, HDL_METRIC_EUCLIDEAN = 1 } hdl_metric;

typedef enum hdl_method { HDL_METHOD_HDL = 0, HDL_METHOD_KNN_DV = 1 } hdl_method;

typedef struct hdl_embeddings hdl_embeddings;
typedef struct hdl_labels hdl_labels;
typedef struct hdl_output hdl_output;
typedef struct hdl_k_report hdl_k_report;
typedef struct hdl_eval hdl_eval;

HDL_API const char* hdl_version(void);
HDL_API const char* hdl_status_name(hdl_status status);
/* Message for the last failing call on this thread; empty after a call that
 * returned HDL_OK. */
HDL_API const char* hdl_last_error(void);

/* Embeddings (EMB1 files or caller buffers, row-major). */
HDL_API hdl_status hdl_embeddings_load(const char* path, hdl_embeddings** out);
HDL_API hdl_status hdl_embeddings_from_buffer(const float* data, uint64_t count, uint32_t dim,
                                              hdl_embeddings** out);
HDL_API hdl_status hdl_embeddings_save(const hdl_embeddings* set, const char* path);
HDL_API uint64_t hdl_embeddings_count(const hdl_embeddings* set);
HDL_API uint32_t hdl_embeddings_dim(const hdl_embeddings* set);
HDL_API void hdl_embeddings_free(hdl_embeddings* set);

/* Labels ("index,label" CSV). num_classes <= 0 means 1 + max(label). */
HDL_API hdl_status hdl_labels_load(const char* path, uint64_t expected_count,
                                   int32_t num_classes, hdl_labels** out);
HDL_API hdl_status hdl_labels_from_buffer(const int32_t* labels, uint64_t count,
                                          int32_t num_classes, hdl_labels** out);
HDL_API hdl_status hdl_labels_save(const hdl_labels* labels, const char* path);
HDL_API uint64_t hdl_labels_count(const hdl_labels* labels);
HDL_API int32_t hdl_labels_num_classes(const hdl_labels* labels);
HDL_API int32_t hdl_labels_get(const hdl_labels* labels, uint64_t i);
HDL_API void hdl_labels_free(hdl_labels* labels);

/* Labeling. */
typedef struct hdl_label_options {
  hdl_method method;
  uint64_t k;
  hdl_metric metric;
  uint32_t threads; /* 0: hardware concurrency */
} hdl_label_options;

typedef struct hdl_record {
  uint64_t index; /* row in the unlabeled set */
  int32_t label;
  uint64_t level;
  uint64_t rank;
  double margin;
  int32_t tied;
} hdl_record;

HDL_API hdl_status hdl_label(const hdl_embeddings* labeled, const hdl_labels* labels,
                             const hdl_embeddings* unlabeled, const hdl_label_options* options,
                             hdl_output** out);
HDL_API uint64_t hdl_output_count(const hdl_output* output);
HDL_API uint64_t hdl_output_level_count(const hdl_output* output);
/* Records are indexed in (level, rank) order, the order they are written. */
HDL_API hdl_status hdl_output_record(const hdl_output* output, uint64_t i, hdl_record* out);
HDL_API hdl_status hdl_output_write(const hdl_output* output, const char* path);
HDL_API hdl_status hdl_output_load(const char* path, hdl_output** out);
HDL_API void hdl_output_free(hdl_output* output);

/* Clusterability and adaptive k. */
typedef struct hdl_k_params {
  double sample_fraction; /* p */
  double error_rate;      /* e */
  uint64_t k_upper_limit; /* candidates 1 .. k_upper_limit - 1 */
  uint64_t seed;
  int32_t with_replacement;
  hdl_metric metric;
  uint32_t threads;
} hdl_k_params;

/* p = 0.1, e = 0.15, k_upper_limit = 20, seed = 0, with replacement, cosine. */
HDL_API void hdl_k_params_default(hdl_k_params* params);
HDL_API hdl_status hdl_reg_inc_beta(int64_t a, int64_t b, double x, double* out);
HDL_API hdl_status hdl_beta_factor(uint64_t k, double error_rate, double* out);
/* Uses params->seed as-is (no per-k offset); error_rate and k_upper_limit are
 * ignored. */
HDL_API hdl_status hdl_estimate_mu(const hdl_embeddings* labeled, const hdl_labels* labels,
                                   uint64_t k, const hdl_k_params* params, double* out_mu);
HDL_API hdl_status hdl_select_k(const hdl_embeddings* labeled, const hdl_labels* labels,
                                const hdl_k_params* params, hdl_k_report** out);
HDL_API uint64_t hdl_k_report_chosen(const hdl_k_report* report);
HDL_API uint64_t hdl_k_report_count(const hdl_k_report* report);
HDL_API hdl_status hdl_k_report_candidate(const hdl_k_report* report, uint64_t i,
                                          uint64_t* k, double* mu, double* beta,
                                          double* product);
/* snprintf-style: writes at most capacity bytes including the terminator and
 * stores the full length (without terminator) in *needed. */
HDL_API hdl_status hdl_k_report_format(const hdl_k_report* report, char* buffer,
                                       size_t capacity, size_t* needed);
HDL_API void hdl_k_report_free(hdl_k_report* report);

/* Synthetic data and evaluation. */
typedef struct hdl_synth_spec {
  int32_t num_classes;
  uint32_t dim;
  const uint64_t* class_counts; /* num_classes entries */
  double radius;                /* class c is centered at radius * e_c */
  double sigma;
  double labeled_fraction;
  uint64_t seed;
} hdl_synth_spec;

HDL_API hdl_status hdl_synth_long_tail_counts(uint64_t max_count, int32_t num_classes,
                                              double imbalance_factor, uint64_t* out_counts);
HDL_API hdl_status hdl_synth_generate(const hdl_synth_spec* spec, hdl_embeddings** labeled,
                                      hdl_labels** labels, hdl_embeddings** unlabeled,
                                      hdl_labels** truth, double* imbalance_factor);

HDL_API hdl_status hdl_evaluate(const hdl_output* output, const hdl_labels* truth,
                                const char* method, hdl_eval** out);
HDL_API double hdl_eval_accuracy(const hdl_eval* eval);
HDL_API hdl_status hdl_eval_format_json(const hdl_eval* eval, char* buffer, size_t capacity,
                                        size_t* needed);
HDL_API void hdl_eval_free(hdl_eval* eval);

#ifdef __cplusplus
}
#endif

#endif /* HDLABEL_HDLABEL_H_ */
