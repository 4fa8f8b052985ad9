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

// hdlabel command-line tool. Talks to the engine only through hdlabel.h.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdlabel/hdlabel.h"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

// Data-level failure surfaced by the C API (exit code 1).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag validation failure not caught by CLI11 (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(hdl_status status, const std::string& context) {
  if (status != HDL_OK)
    throw DataError(context + ": " + hdl_status_name(status) + ": " + hdl_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Embeddings = std::unique_ptr<hdl_embeddings, Deleter<hdl_embeddings, hdl_embeddings_free>>;
using Labels = std::unique_ptr<hdl_labels, Deleter<hdl_labels, hdl_labels_free>>;
using Output = std::unique_ptr<hdl_output, Deleter<hdl_output, hdl_output_free>>;
using KReport = std::unique_ptr<hdl_k_report, Deleter<hdl_k_report, hdl_k_report_free>>;
using Eval = std::unique_ptr<hdl_eval, Deleter<hdl_eval, hdl_eval_free>>;

Embeddings LoadEmbeddings(const std::string& path) {
  hdl_embeddings* raw = nullptr;
  Check(hdl_embeddings_load(path.c_str(), &raw), path);
  return Embeddings(raw);
}

Labels LoadLabels(const std::string& path, uint64_t expected, int num_classes) {
  hdl_labels* raw = nullptr;
  Check(hdl_labels_load(path.c_str(), expected, num_classes, &raw), path);
  return Labels(raw);
}

hdl_metric ToMetric(const std::string& name) {
  return name == "euclidean" ? HDL_METRIC_EUCLIDEAN : HDL_METRIC_COSINE;
}

void WriteText(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw DataError("cannot open '" + path + "' for writing");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw DataError("write failed on '" + path + "'");
}

void RequireDistinct(const std::vector<std::pair<std::string, std::string>>& flags) {
  std::set<std::string> seen;
  for (const auto& [flag, path] : flags) {
    if (path.empty() || path == "-") continue;
    if (!seen.insert(path).second)
      throw UsageError(flag + ": path '" + path + "' is used by more than one flag");
  }
}

struct AdaptiveFlags {
  double p = 0.1;
  double e = 0.15;
  uint64_t k_upper_limit = 20;
  bool without_replacement = false;

  void Register(CLI::App* cmd) {
    cmd->add_option("--p", p, "fraction of labeled points sampled as centers")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--e", e, "assumed label-error rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--k-upper-limit", k_upper_limit, "candidates are k = 1 .. limit-1")
        ->check(CLI::Range(uint64_t{2}, uint64_t{1} << 32));
    cmd->add_flag("--without-replacement", without_replacement,
                  "sample centers without replacement");
  }

  hdl_k_params Params(uint64_t seed, const std::string& metric, unsigned threads) const {
    hdl_k_params params;
    hdl_k_params_default(&params);
    params.sample_fraction = p;
    params.error_rate = e;
    params.k_upper_limit = k_upper_limit;
    params.seed = seed;
    params.with_replacement = without_replacement ? 0 : 1;
    params.metric = ToMetric(metric);
    params.threads = threads;
    return params;
  }

  nlohmann::json Json() const {
    return {{"p", p}, {"e", e}, {"k_upper_limit", k_upper_limit},
            {"with_replacement", !without_replacement}};
  }
};

std::string FormatReport(const hdl_k_report* report) {
  size_t needed = 0;
  Check(hdl_k_report_format(report, nullptr, 0, &needed), "format report");
  std::string text(needed + 1, '\0');
  Check(hdl_k_report_format(report, text.data(), text.size(), &needed), "format report");
  text.resize(needed);
  return text;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdlabel: neighbor-voting pseudo-labeling for embedding sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hdl_version());

  std::string metric = "cosine";
  unsigned threads = 0;
  uint64_t seed = 0;
  int num_classes = 0;
  AdaptiveFlags adaptive;
  std::string labeled_path, labels_path, unlabeled_path, out_path, truth_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--metric", metric, "distance metric")
        ->check(CLI::IsMember({"cosine", "euclidean"}));
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  };

  // label
  auto* label = app.add_subcommand("label", "assign labels to an unlabeled embedding set");
  std::string method = "hdl";
  std::string k_text = "auto";
  label->add_option("--method", method, "labeling method")
      ->check(CLI::IsMember({"hdl", "knn-dv"}));
  label->add_option("--k", k_text, "neighbor count, or 'auto' for adaptive selection");
  label->add_option("--labeled", labeled_path, "labeled embeddings (EMB1)")->required();
  label->add_option("--labels", labels_path, "labels CSV for --labeled")->required();
  label->add_option("--unlabeled", unlabeled_path, "unlabeled embeddings (EMB1)")->required();
  label->add_option("--out", out_path, "output CSV")->required();
  label->add_option("--seed", seed, "random seed")->required();
  label->add_option("--num-classes", num_classes, "class count override");
  adaptive.Register(label);
  add_common(label);

  // select-k
  auto* select_k = app.add_subcommand("select-k", "choose k from the labeled set");
  select_k->add_option("--labeled", labeled_path, "labeled embeddings (EMB1)")->required();
  select_k->add_option("--labels", labels_path, "labels CSV for --labeled")->required();
  select_k->add_option("--seed", seed, "random seed")->required();
  select_k->add_option("--out", out_path, "report CSV (default: stdout)");
  select_k->add_option("--num-classes", num_classes, "class count override");
  adaptive.Register(select_k);
  add_common(select_k);

  // estimate-mu
  auto* estimate_mu = app.add_subcommand("estimate-mu", "clusterability estimate per k");
  uint64_t k_min = 1, k_max = 10;
  double mu_p = 0.1;
  bool mu_without_replacement = false;
  estimate_mu->add_option("--labeled", labeled_path, "labeled embeddings (EMB1)")->required();
  estimate_mu->add_option("--labels", labels_path, "labels CSV for --labeled")->required();
  estimate_mu->add_option("--seed", seed, "random seed")->required();
  estimate_mu->add_option("--k-min", k_min, "first k")->check(CLI::PositiveNumber);
  estimate_mu->add_option("--k-max", k_max, "last k")->check(CLI::PositiveNumber);
  estimate_mu->add_option("--p", mu_p, "fraction of labeled points sampled as centers")
      ->check(CLI::Range(0.0, 1.0));
  estimate_mu->add_flag("--without-replacement", mu_without_replacement,
                        "sample centers without replacement");
  estimate_mu->add_option("--out", out_path, "CSV (default: stdout)");
  estimate_mu->add_option("--num-classes", num_classes, "class count override");
  add_common(estimate_mu);

  // gen-synth
  auto* gen = app.add_subcommand("gen-synth", "generate a synthetic Gaussian-cluster task");
  int classes = 4;
  uint32_t dim = 16;
  uint64_t per_class = 100;
  std::vector<uint64_t> counts;
  uint64_t max_count = 0;
  double imbalance = 1.0;
  double sigma = 0.3, radius = 1.0, labeled_fraction = 0.1;
  gen->add_option("--classes", classes, "number of classes")->check(CLI::Range(2, 1 << 20));
  gen->add_option("--dim", dim, "embedding dimension")->check(CLI::PositiveNumber);
  auto* per_class_opt = gen->add_option("--per-class", per_class, "points per class");
  auto* counts_opt =
      gen->add_option("--counts", counts, "explicit per-class counts")->delimiter(',');
  auto* max_count_opt =
      gen->add_option("--max-count", max_count, "head-class count of a long-tailed profile");
  gen->add_option("--imbalance-factor", imbalance, "n_1 / n_C of the long-tailed profile")
      ->needs(max_count_opt)
      ->check(CLI::Range(1.0, 1e9));
  per_class_opt->excludes(counts_opt)->excludes(max_count_opt);
  counts_opt->excludes(max_count_opt);
  gen->add_option("--sigma", sigma, "cluster standard deviation")->check(CLI::Range(0.0, 1e6));
  gen->add_option("--radius", radius, "distance of class means from the origin");
  gen->add_option("--labeled-fraction", labeled_fraction, "labeled share of each class")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed, "random seed")->required();
  gen->add_option("--labeled", labeled_path, "labeled embeddings to write")->required();
  gen->add_option("--labels", labels_path, "labels CSV to write")->required();
  gen->add_option("--unlabeled", unlabeled_path, "unlabeled embeddings to write")->required();
  gen->add_option("--truth", truth_path, "ground-truth CSV to write")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "score an output CSV against ground truth");
  std::string eval_method = "unknown";
  eval->add_option("--output", out_path, "output CSV from 'label'")->required();
  eval->add_option("--truth", truth_path, "ground-truth CSV")->required();
  eval->add_option("--method", eval_method, "method name reported in the JSON");
  eval->add_option("--num-classes", num_classes, "class count override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  nlohmann::json manifest;
  try {
    if (*label) {
      RequireDistinct({{"--labeled", labeled_path},
                       {"--labels", labels_path},
                       {"--unlabeled", unlabeled_path},
                       {"--out", out_path}});
      std::optional<uint64_t> fixed_k;
      if (k_text != "auto") {
        uint64_t k = 0;
        std::size_t used = 0;
        try {
          k = std::stoull(k_text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != k_text.size() || k == 0 || k_text.front() == '-')
          throw UsageError("--k: expected a positive integer or 'auto', got '" + k_text + "'");
        fixed_k = k;
      }
      Embeddings labeled = LoadEmbeddings(labeled_path);
      Labels labels = LoadLabels(labels_path, hdl_embeddings_count(labeled.get()), num_classes);
      Embeddings unlabeled = LoadEmbeddings(unlabeled_path);

      uint64_t k = 0;
      nlohmann::json k_info;
      if (fixed_k) {
        k = *fixed_k;
        k_info = {{"source", "fixed"}};
      } else {
        const hdl_k_params params = adaptive.Params(seed, metric, threads);
        hdl_k_report* raw = nullptr;
        Check(hdl_select_k(labeled.get(), labels.get(), &params, &raw), "select-k");
        KReport report(raw);
        k = hdl_k_report_chosen(report.get());
        k_info = {{"source", "auto"}, {"adaptive", adaptive.Json()}};
      }
      hdl_label_options options{method == "knn-dv" ? HDL_METHOD_KNN_DV : HDL_METHOD_HDL, k,
                                ToMetric(metric), threads};
      hdl_output* raw_out = nullptr;
      Check(hdl_label(labeled.get(), labels.get(), unlabeled.get(), &options, &raw_out), "label");
      Output output(raw_out);
      Check(hdl_output_write(output.get(), out_path.c_str()), out_path);
      manifest = {{"command", "label"},
                   {"config",
                    {{"method", method},
                     {"k", k_text},
                     {"metric", metric},
                     {"labeled", labeled_path},
                     {"labels", labels_path},
                     {"unlabeled", unlabeled_path},
                     {"out", out_path},
                     {"seed", seed},
                     {"threads", threads}}},
                   {"k_selection", k_info},
                   {"chosen_k", k},
                   {"records", hdl_output_count(output.get())},
                   {"level_count", hdl_output_level_count(output.get())}};
    } else if (*select_k) {
      RequireDistinct({{"--labeled", labeled_path}, {"--labels", labels_path}, {"--out", out_path}});
      Embeddings labeled = LoadEmbeddings(labeled_path);
      Labels labels = LoadLabels(labels_path, hdl_embeddings_count(labeled.get()), num_classes);
      const hdl_k_params params = adaptive.Params(seed, metric, threads);
      hdl_k_report* raw = nullptr;
      Check(hdl_select_k(labeled.get(), labels.get(), &params, &raw), "select-k");
      KReport report(raw);
      WriteText(FormatReport(report.get()), out_path);
      manifest = {{"command", "select-k"},
                  {"config",
                   {{"labeled", labeled_path}, {"labels", labels_path}, {"seed", seed},
                    {"metric", metric}, {"adaptive", adaptive.Json()}}},
                  {"chosen_k", hdl_k_report_chosen(report.get())}};
    } else if (*estimate_mu) {
      RequireDistinct({{"--labeled", labeled_path}, {"--labels", labels_path}, {"--out", out_path}});
      if (k_min > k_max) throw UsageError("--k-min: must not exceed --k-max");
      Embeddings labeled = LoadEmbeddings(labeled_path);
      Labels labels = LoadLabels(labels_path, hdl_embeddings_count(labeled.get()), num_classes);
      hdl_k_params params;
      hdl_k_params_default(&params);
      params.sample_fraction = mu_p;
      params.with_replacement = mu_without_replacement ? 0 : 1;
      params.metric = ToMetric(metric);
      params.threads = threads;
      // One seed for every k: all k share the same sampled centers.
      params.seed = seed;
      std::string text = "k,mu\n";
      char buf[96];
      for (uint64_t k = k_min; k <= k_max; ++k) {
        double mu = 0.0;
        Check(hdl_estimate_mu(labeled.get(), labels.get(), k, &params, &mu),
              "estimate-mu k=" + std::to_string(k));
        std::snprintf(buf, sizeof(buf), "%llu,%.17g\n", static_cast<unsigned long long>(k), mu);
        text += buf;
      }
      WriteText(text, out_path);
      manifest = {{"command", "estimate-mu"},
                  {"config",
                   {{"labeled", labeled_path}, {"labels", labels_path}, {"seed", seed},
                    {"metric", metric}, {"p", mu_p}, {"k_min", k_min}, {"k_max", k_max}}}};
    } else if (*gen) {
      RequireDistinct({{"--labeled", labeled_path},
                       {"--labels", labels_path},
                       {"--unlabeled", unlabeled_path},
                       {"--truth", truth_path}});
      std::vector<uint64_t> class_counts;
      if (!counts.empty()) {
        class_counts = counts;
        classes = static_cast<int>(counts.size());
      } else if (max_count > 0) {
        class_counts.resize(static_cast<std::size_t>(classes));
        Check(hdl_synth_long_tail_counts(max_count, classes, imbalance, class_counts.data()),
              "long-tail profile");
      } else {
        class_counts.assign(static_cast<std::size_t>(classes), per_class);
      }
      hdl_synth_spec spec{classes, dim, class_counts.data(), radius, sigma, labeled_fraction, seed};
      hdl_embeddings *l = nullptr, *u = nullptr;
      hdl_labels *ll = nullptr, *t = nullptr;
      double realized_if = 0.0;
      Check(hdl_synth_generate(&spec, &l, &ll, &u, &t, &realized_if), "gen-synth");
      Embeddings labeled(l), unlabeled(u);
      Labels labels(ll), truth(t);
      Check(hdl_embeddings_save(labeled.get(), labeled_path.c_str()), labeled_path);
      Check(hdl_labels_save(labels.get(), labels_path.c_str()), labels_path);
      Check(hdl_embeddings_save(unlabeled.get(), unlabeled_path.c_str()), unlabeled_path);
      Check(hdl_labels_save(truth.get(), truth_path.c_str()), truth_path);
      manifest = {{"command", "gen-synth"},
                  {"config",
                   {{"classes", classes}, {"dim", dim}, {"counts", class_counts},
                    {"sigma", sigma}, {"radius", radius},
                    {"labeled_fraction", labeled_fraction}, {"seed", seed}}},
                  {"imbalance_factor", realized_if},
                  {"labeled_count", hdl_embeddings_count(labeled.get())},
                  {"unlabeled_count", hdl_embeddings_count(unlabeled.get())}};
    } else if (*eval) {
      RequireDistinct({{"--output", out_path}, {"--truth", truth_path}});
      hdl_output* raw = nullptr;
      Check(hdl_output_load(out_path.c_str(), &raw), out_path);
      Output output(raw);
      Labels truth = LoadLabels(truth_path, hdl_output_count(output.get()), num_classes);
      hdl_eval* raw_eval = nullptr;
      Check(hdl_evaluate(output.get(), truth.get(), eval_method.c_str(), &raw_eval), "eval");
      Eval result(raw_eval);
      size_t needed = 0;
      Check(hdl_eval_format_json(result.get(), nullptr, 0, &needed), "eval");
      std::string json(needed + 1, '\0');
      Check(hdl_eval_format_json(result.get(), json.data(), json.size(), &needed), "eval");
      json.resize(needed);
      WriteText(json + "\n", "-");
      manifest = {{"command", "eval"}, {"accuracy", hdl_eval_accuracy(result.get())}};
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  manifest["wall_time_s"] = Seconds(start);
  std::cerr << manifest.dump() << "\n";
  return 0;
}
