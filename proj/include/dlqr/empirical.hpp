// Copyright 2026 The distlqr Authors
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

#ifndef DLQR_EMPIRICAL_HPP_
#define DLQR_EMPIRICAL_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dlqr {

// Provenance of a sample set: which master seed and generation settings
// produced it.
struct SeedInfo {
  std::uint64_t master_seed = 0;
  std::string params;
};

// A sorted sample of scalar returns with right-continuous EDF queries.
// Immutable after construction, safe to share between threads.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples, SeedInfo seed_info = {});

  const std::vector<double>& samples() const { return samples_; }
  const SeedInfo& seed_info() const { return seed_info_; }
  std::size_t size() const { return samples_.size(); }

  // Fraction of samples <= z.
  double edf(double z) const;

  double min() const { return samples_.front(); }
  double max() const { return samples_.back(); }
  double mean() const;
  double variance() const;  // unbiased (divides by size - 1)

  // Two columns "z,edf", one row per sample point.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<double> samples_;
  SeedInfo seed_info_;
};

// Exact two-sample sup-CDF distance: the EDF gap is evaluated at every pooled
// sample point and at its left limit, which is exhaustive for step functions.
double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2);

// Normalized density histogram; the densities integrate to 1 over the bins.
struct HistogramDensity {
  std::vector<double> bin_edges;  // size = bins + 1, ascending
  std::vector<double> densities;  // size = bins, nonnegative
  double f_max = 0.0;             // max bin density

  // Three columns "bin_left,bin_right,density".
  void write_csv(std::ostream& os) const;
};

// Freedman-Diaconis binning; requires at least 100 samples.
HistogramDensity histogram_density(const EmpiricalDistribution& dist);

// Fixed bin count (>= 1).
HistogramDensity histogram_density(const EmpiricalDistribution& dist, int bin_count);

// Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(1/delta) / (2M)).
double dkw_epsilon(std::size_t m, double delta);

// Shortest decimal string that parses back to exactly the same double; used
// for all CSV output so artifacts are byte-stable across runs.
std::string format_double(double v);

}  // namespace dlqr

#endif  // DLQR_EMPIRICAL_HPP_
