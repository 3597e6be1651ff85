#pragma once

#include <vector>

namespace billchain::bench {

struct LatencySummary {
  size_t count = 0;
  double mean = 0;
  double p50 = 0;
  double p95 = 0;
  double p99 = 0;
  double max = 0;
};

// Nearest-rank percentile, p in (0, 100]. Empty input gives 0.
double percentile(std::vector<double> values, double p);
LatencySummary summarize(const std::vector<double>& values);

}  // namespace billchain::bench
