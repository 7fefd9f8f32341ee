// SPDX-License-Identifier: Apache-2.0

#include "uwbhar/accounting.hpp"

#include <cstdio>

namespace uwbhar::nn {

std::string format_layer_table(const std::vector<LayerInfo>& table) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %-8s %3s %3s %3s %12s %14s %12s %14s\n", "layer",
                "kind", "k", "G", "d", "params", "flops", "cum_params", "cum_flops");
  out += line;
  std::size_t cum_params = 0;
  long long cum_flops = 0;
  for (const LayerInfo& row : table) {
    cum_params += row.params;
    cum_flops += 2 * row.macs;
    std::snprintf(line, sizeof(line), "%-18s %-8s %3d %3d %3d %12zu %14lld %12zu %14lld\n",
                  row.name.c_str(), op_kind_name(row.kind), row.kernel, row.groups, row.dilation,
                  row.params, 2 * row.macs, cum_params, cum_flops);
    out += line;
  }
  std::snprintf(line, sizeof(line), "total params=%zu flops=%lld\n", cum_params, cum_flops);
  out += line;
  return out;
}

}  // namespace uwbhar::nn
