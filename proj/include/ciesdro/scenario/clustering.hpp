// Copyright 2026 The ciesdro Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ciesdro::scenario {

inline constexpr int kHours = 24;

enum class SourceTag : std::uint8_t { PV, WT, Other };

inline const char* to_string(SourceTag t) {
  switch (t) {
    case SourceTag::PV: return "PV";
    case SourceTag::WT: return "WT";
    case SourceTag::Other: return "other";
  }
  return "other";
}

/// Daily hourly profiles, one row per day, row-major.
struct SampleMatrix {
  int rows = 0;
  int cols = kHours;
  std::vector<double> values;
  SourceTag tag = SourceTag::Other;

  static SampleMatrix from_rows(const std::vector<std::vector<double>>& data,
                                SourceTag tag = SourceTag::Other) {
    SampleMatrix m;
    m.rows = static_cast<int>(data.size());
    m.cols = data.empty() ? kHours : static_cast<int>(data.front().size());
    m.tag = tag;
    for (const auto& r : data) {
      if (static_cast<int>(r.size()) != m.cols)
        throw std::invalid_argument("SampleMatrix: ragged rows");
      m.values.insert(m.values.end(), r.begin(), r.end());
    }
    return m;
  }

  std::span<const double> row(int r) const {
    return {values.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }

  void validate() const {
    if (rows < 1) throw std::invalid_argument("SampleMatrix: needs at least one row");
    if (cols != kHours) throw std::invalid_argument("SampleMatrix: expected 24 columns");
    if (values.size() != static_cast<std::size_t>(rows) * cols)
      throw std::invalid_argument("SampleMatrix: size mismatch");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("SampleMatrix: values must be finite and non-negative");
  }
};

struct Clustering {
  std::vector<int> labels;
  std::vector<std::vector<double>> centers;
  std::vector<double> probabilities;
  /// Within-cluster sum of squares after each Lloyd update.
  std::vector<double> sse_trace;
  int iterations = 0;

  int k() const { return static_cast<int>(centers.size()); }
};

/// Raised when an index is undefined for the given clustering.
class DegenerateClustering : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void check_consistent(const SampleMatrix& s, const Clustering& c) {
  if (static_cast<int>(c.labels.size()) != s.rows)
    throw std::invalid_argument("clustering has a different row count than the samples");
  for (int l : c.labels)
    if (l < 0 || l >= c.k()) throw std::invalid_argument("clustering label out of range");
  for (const auto& ctr : c.centers)
    if (static_cast<int>(ctr.size()) != s.cols)
      throw std::invalid_argument("clustering center has the wrong dimension");
}

inline void recenter(const SampleMatrix& s, Clustering& c) {
  const int k = c.k();
  std::vector<int> count(k, 0);
  for (auto& ctr : c.centers) std::fill(ctr.begin(), ctr.end(), 0.0);
  for (int r = 0; r < s.rows; ++r) {
    int l = c.labels[r];
    ++count[l];
    auto row = s.row(r);
    for (int j = 0; j < s.cols; ++j) c.centers[l][j] += row[j];
  }
  for (int l = 0; l < k; ++l)
    if (count[l] > 0)
      for (double& v : c.centers[l]) v /= count[l];
}

inline double sse(const SampleMatrix& s, const Clustering& c) {
  double total = 0.0;
  for (int r = 0; r < s.rows; ++r) total += squared_distance(s.row(r), c.centers[c.labels[r]]);
  return total;
}

}  // namespace detail

/**
 * k-means++ seeding followed by Lloyd iterations, stopping when no label
 * changes or after 300 iterations. Empty clusters are refilled with the
 * point farthest from its center. Probabilities are member fractions.
 */
inline Clustering kmeans_cluster(const SampleMatrix& samples, int k, std::uint64_t seed) {
  samples.validate();
  if (k <= 0) throw std::invalid_argument("kmeans_cluster: k must be positive");
  if (k > samples.rows) throw std::invalid_argument("kmeans_cluster: k exceeds the row count");
  const int n = samples.rows;
  std::mt19937_64 rng(seed);

  std::vector<int> chosen;
  chosen.push_back(std::min(n - 1, static_cast<int>(detail::uniform01(rng) * n)));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(chosen.size()) < k) {
    auto last = samples.row(chosen.back());
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      d2[r] = std::min(d2[r], detail::squared_distance(samples.row(r), last));
      total += d2[r];
    }
    int pick = -1;
    if (total > 0.0) {
      double target = detail::uniform01(rng) * total;
      double acc = 0.0;
      for (int r = 0; r < n; ++r) {
        acc += d2[r];
        if (d2[r] > 0.0 && acc > target) {
          pick = r;
          break;
        }
      }
      if (pick < 0)
        for (int r = n - 1; r >= 0; --r)
          if (d2[r] > 0.0) {
            pick = r;
            break;
          }
    } else {
      // Every point coincides with a center; take the first unused row.
      for (int r = 0; r < n && pick < 0; ++r)
        if (std::find(chosen.begin(), chosen.end(), r) == chosen.end()) pick = r;
    }
    chosen.push_back(pick);
  }

  Clustering c;
  c.labels.assign(n, -1);
  for (int r : chosen) {
    auto row = samples.row(r);
    c.centers.emplace_back(row.begin(), row.end());
  }

  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (int r = 0; r < n; ++r) {
      int best = 0;
      double bd = detail::squared_distance(samples.row(r), c.centers[0]);
      for (int l = 1; l < k; ++l) {
        double d = detail::squared_distance(samples.row(r), c.centers[l]);
        if (d < bd) {
          bd = d;
          best = l;
        }
      }
      if (c.labels[r] != best) {
        c.labels[r] = best;
        changed = true;
      }
    }
    // Refill empty clusters from the worst-fit point of a cluster with
    // at least two members.
    std::vector<int> count(k, 0);
    for (int l : c.labels) ++count[l];
    for (int l = 0; l < k; ++l) {
      if (count[l] > 0) continue;
      int far = -1;
      double fd = -1.0;
      for (int r = 0; r < n; ++r) {
        if (count[c.labels[r]] < 2) continue;
        double d = detail::squared_distance(samples.row(r), c.centers[c.labels[r]]);
        if (d > fd) {
          fd = d;
          far = r;
        }
      }
      --count[c.labels[far]];
      c.labels[far] = l;
      count[l] = 1;
      changed = true;
    }
    if (!changed) break;
    detail::recenter(samples, c);
    c.sse_trace.push_back(detail::sse(samples, c));
    c.iterations = iter + 1;
  }

  std::vector<int> count(k, 0);
  for (int l : c.labels) ++count[l];
  c.probabilities.resize(k);
  for (int l = 0; l < k; ++l) c.probabilities[l] = static_cast<double>(count[l]) / n;
  return c;
}

/// Mean over clusters of the worst (S_i + S_j) / d(C_i, C_j), with S the
/// mean member distance to the center.
inline double davies_bouldin(const SampleMatrix& samples, const Clustering& c) {
  detail::check_consistent(samples, c);
  const int k = c.k();
  if (k < 2) throw std::invalid_argument("davies_bouldin: needs k >= 2");
  std::vector<double> spread(k, 0.0);
  std::vector<int> count(k, 0);
  for (int r = 0; r < samples.rows; ++r) {
    int l = c.labels[r];
    spread[l] += detail::distance(samples.row(r), c.centers[l]);
    ++count[l];
  }
  for (int l = 0; l < k; ++l)
    if (count[l] > 0) spread[l] /= count[l];
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      double d = detail::distance(c.centers[i], c.centers[j]);
      if (d == 0.0)
        throw DegenerateClustering("davies_bouldin: clusters " + std::to_string(i) + " and " +
                                   std::to_string(j) + " have coincident centers");
      worst = std::max(worst, (spread[i] + spread[j]) / d);
    }
    total += worst;
  }
  return total / k;
}

/// Mean silhouette over samples; members of singleton clusters score 0.
inline double silhouette(const SampleMatrix& samples, const Clustering& c) {
  detail::check_consistent(samples, c);
  const int k = c.k();
  if (k < 2) throw std::invalid_argument("silhouette: needs k >= 2");
  const int n = samples.rows;
  std::vector<int> count(k, 0);
  for (int l : c.labels) ++count[l];
  std::vector<double> sum(k);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    int own = c.labels[r];
    if (count[own] < 2) continue;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (int q = 0; q < n; ++q) {
      if (q == r) continue;
      sum[c.labels[q]] += detail::distance(samples.row(r), samples.row(q));
    }
    double a = sum[own] / (count[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int l = 0; l < k; ++l)
      if (l != own && count[l] > 0) b = std::min(b, sum[l] / count[l]);
    if (!std::isfinite(b)) continue;
    double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / n;
}

struct ClusterIndexRow {
  int k;
  double dbi;
  double sc;
};

struct ClusterSelection {
  int k = 0;
  std::vector<ClusterIndexRow> table;
  Clustering clustering;
};

/// Highest silhouette; ties by lower DBI, then by smaller k.
inline int select_from_table(const std::vector<ClusterIndexRow>& table, double tie_tol = 1e-12) {
  if (table.empty()) throw std::invalid_argument("select_from_table: empty table");
  const ClusterIndexRow* best = &table.front();
  for (const auto& row : table) {
    if (&row == best) continue;
    bool better;
    if (std::abs(row.sc - best->sc) > tie_tol) better = row.sc > best->sc;
    else if (std::abs(row.dbi - best->dbi) > tie_tol) better = row.dbi < best->dbi;
    else better = row.k < best->k;
    if (better) best = &row;
  }
  return best->k;
}

/// Clusters for every k in [k_min, k_max] and picks k by select_from_table.
inline ClusterSelection select_cluster_count(const SampleMatrix& samples, int k_min, int k_max,
                                             std::uint64_t seed) {
  samples.validate();
  if (k_min < 2 || k_min > k_max || k_max > samples.rows)
    throw std::invalid_argument("select_cluster_count: need 2 <= k_min <= k_max <= rows");
  ClusterSelection out;
  std::vector<Clustering> runs;
  for (int k = k_min; k <= k_max; ++k) {
    runs.push_back(kmeans_cluster(samples, k, seed));
    out.table.push_back({k, davies_bouldin(samples, runs.back()), silhouette(samples, runs.back())});
  }
  out.k = select_from_table(out.table);
  out.clustering = std::move(runs[out.k - k_min]);
  return out;
}

}  // namespace ciesdro::scenario
