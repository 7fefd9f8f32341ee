// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "uwbhar/net.hpp"
#include "uwbhar/train.hpp"

namespace uwbhar::harness {

inline constexpr int kNumClasses = 7;

struct MetricsReport {
  std::vector<double> precision;  // per class
  std::vector<double> recall;
  std::vector<double> f1;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
};

// Precision/recall/F1/accuracy straight from a confusion matrix.
// F1 is 0 when precision + recall is 0.
MetricsReport metrics_from_confusion(const std::vector<std::vector<int>>& confusion);

MetricsReport evaluate(nn::Network<float>& net, const std::vector<nn::TrainSample>& samples);

std::string format_metrics(const MetricsReport& report, const std::vector<std::string>& labels);
std::string metrics_to_json(const MetricsReport& report, const std::vector<std::string>& labels);
std::string confusion_to_csv(const MetricsReport& report);

}  // namespace uwbhar::harness
