// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace uwbhar::harness {

MetricsReport metrics_from_confusion(const std::vector<std::vector<int>>& confusion) {
  const std::size_t n = confusion.size();
  if (n == 0) throw std::invalid_argument("metrics: empty confusion matrix");
  for (const auto& row : confusion)
    if (row.size() != n) throw std::invalid_argument("metrics: confusion matrix not square");

  MetricsReport report;
  report.confusion = confusion;
  report.precision.resize(n);
  report.recall.resize(n);
  report.f1.resize(n);

  long long total = 0, diag = 0;
  for (std::size_t c = 0; c < n; ++c) {
    long long tp = confusion[c][c];
    long long fn = 0, fp = 0;
    for (std::size_t o = 0; o < n; ++o) {
      total += confusion[c][o];
      if (o != c) {
        fn += confusion[c][o];
        fp += confusion[o][c];
      }
    }
    diag += tp;
    const double p = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double r = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    report.precision[c] = p;
    report.recall[c] = r;
    report.f1[c] = (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
  }

  for (std::size_t c = 0; c < n; ++c) {
    report.macro_precision += report.precision[c];
    report.macro_recall += report.recall[c];
    report.macro_f1 += report.f1[c];
  }
  report.macro_precision /= static_cast<double>(n);
  report.macro_recall /= static_cast<double>(n);
  report.macro_f1 /= static_cast<double>(n);
  report.accuracy = total > 0 ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
  return report;
}

MetricsReport evaluate(nn::Network<float>& net, const std::vector<nn::TrainSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("evaluate: empty dataset");
  const int n = net.spec().num_classes;
  std::vector<std::vector<int>> confusion(static_cast<std::size_t>(n),
                                          std::vector<int>(static_cast<std::size_t>(n), 0));
  for (const nn::TrainSample& s : samples) {
    const std::vector<float> probs = net.forward(s.time, s.freq);
    const int pred = static_cast<int>(
        std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
    confusion[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(pred)]++;
  }
  return metrics_from_confusion(confusion);
}

std::string format_metrics(const MetricsReport& report, const std::vector<std::string>& labels) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %9s %9s %9s\n", "class", "precision", "recall", "f1");
  out += line;
  for (std::size_t c = 0; c < report.precision.size(); ++c) {
    const std::string name = c < labels.size() ? labels[c] : std::to_string(c);
    std::snprintf(line, sizeof(line), "%-16s %9.4f %9.4f %9.4f\n", name.c_str(),
                  report.precision[c], report.recall[c], report.f1[c]);
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-16s %9.4f %9.4f %9.4f\n", "macro", report.macro_precision,
                report.macro_recall, report.macro_f1);
  out += line;
  std::snprintf(line, sizeof(line), "accuracy %.4f\n", report.accuracy);
  out += line;
  return out;
}

std::string metrics_to_json(const MetricsReport& report, const std::vector<std::string>& labels) {
  nlohmann::json j;
  j["labels"] = labels;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["f1"] = report.f1;
  j["macro_precision"] = report.macro_precision;
  j["macro_recall"] = report.macro_recall;
  j["macro_f1"] = report.macro_f1;
  j["accuracy"] = report.accuracy;
  j["confusion"] = report.confusion;
  return j.dump(2) + "\n";
}

std::string confusion_to_csv(const MetricsReport& report) {
  std::string out;
  for (const auto& row : report.confusion) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += std::to_string(row[i]);
      out += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return out;
}

}  // namespace uwbhar::harness
