#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "c3o/dataset.hpp"
#include "c3o/types.hpp"

namespace c3o::test {

inline Catalog small_catalog() {
  return {{"alpha", 4, 16.0, 0.20}, {"beta", 8, 32.0, 0.40}};
}

inline RuntimeRecord make_record(const std::string& machine, int nodes, double size_mb,
                                 double runtime_ms,
                                 std::map<std::string, double> params = {},
                                 std::int64_t submitted_at = 0,
                                 const std::string& context = "test") {
  RuntimeRecord record;
  record.signature = {"kmeans", "v1"};
  record.config = {machine, nodes};
  record.data_characteristics = {{"size_mb", size_mb}};
  record.parameters = std::move(params);
  record.context_id = context;
  record.runtime_ms = runtime_ms;
  record.submitted_at = submitted_at;
  return record;
}

// Textbook Pearson correlation, kept independent of the implementation.
inline double pearson_oracle(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
    sxy += xs[i] * ys[i];
  }
  const double num = n * sxy - sx * sy;
  const double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return num / den;
}

// Max over all points of the distance to the nearest selected point.
inline double covering_radius(const std::vector<std::vector<double>>& points,
                              const std::vector<std::vector<double>>& selected) {
  double radius = 0.0;
  for (const auto& p : points) {
    double nearest = 1e300;
    for (const auto& s : selected) {
      double sum = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) sum += (p[j] - s[j]) * (p[j] - s[j]);
      nearest = std::min(nearest, std::sqrt(sum));
    }
    radius = std::max(radius, nearest);
  }
  return radius;
}

}  // namespace c3o::test
