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

#include "dlqr/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "dlqr/errors.hpp"

namespace dlqr {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lg", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lg", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples, SeedInfo seed_info)
    : samples_(std::move(samples)), seed_info_(std::move(seed_info)) {
  if (samples_.empty()) {
    throw TooFewSamples("an empirical distribution needs at least one sample");
  }
  for (double s : samples_) {
    if (!std::isfinite(s)) throw NonFinite("sample set contains NaN or Inf");
  }
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::edf(double z) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), z);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::mean() const {
  double acc = 0.0;
  for (double s : samples_) acc += s;
  return acc / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::variance() const {
  if (samples_.size() < 2) return 0.0;
  const double m = mean();
  double acc = 0.0;
  for (double s : samples_) acc += (s - m) * (s - m);
  return acc / static_cast<double>(samples_.size() - 1);
}

void EmpiricalDistribution::write_csv(std::ostream& os) const {
  os << "z,edf\n";
  const double n = static_cast<double>(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    // skip duplicates so each z appears once with its final EDF value
    if (i + 1 < samples_.size() && samples_[i + 1] == samples_[i]) continue;
    os << format_double(samples_[i]) << ',' << format_double((i + 1) / n) << '\n';
  }
}

double ks_distance(const EmpiricalDistribution& d1, const EmpiricalDistribution& d2) {
  const std::vector<double>& a = d1.samples();
  const std::vector<double>& b = d2.samples();
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double sup = 0.0;
  while (ia < a.size() || ib < b.size()) {
    const double z = (ib >= b.size() || (ia < a.size() && a[ia] <= b[ib])) ? a[ia] : b[ib];
    // left limit at z was checked after the previous pooled point; advance
    // both EDFs through all samples equal to z, then compare.
    while (ia < a.size() && a[ia] == z) ++ia;
    while (ib < b.size() && b[ib] == z) ++ib;
    sup = std::max(sup, std::abs(ia / na - ib / nb));
  }
  return sup;
}

namespace {

HistogramDensity build_histogram(const EmpiricalDistribution& dist, int bin_count,
                                 double width_hint) {
  const std::vector<double>& s = dist.samples();
  const double lo = s.front();
  double span = s.back() - s.front();
  if (span <= 0.0) {
    // all samples identical: one bin of enforced minimum width; the density
    // comes from the stored edges so the histogram still integrates to 1
    double hi = lo + std::max(width_hint, 1e-12);
    if (hi <= lo) hi = std::nextafter(lo, std::numeric_limits<double>::infinity());
    HistogramDensity h;
    h.bin_edges = {lo, hi};
    h.densities = {1.0 / (hi - lo)};
    h.f_max = h.densities[0];
    return h;
  }
  HistogramDensity h;
  h.bin_edges.resize(bin_count + 1);
  for (int i = 0; i <= bin_count; ++i) {
    h.bin_edges[i] = lo + span * static_cast<double>(i) / bin_count;
  }
  h.bin_edges.back() = s.back();
  std::vector<std::size_t> counts(bin_count, 0);
  for (double v : s) {
    int idx = static_cast<int>((v - lo) / span * bin_count);
    idx = std::min(std::max(idx, 0), bin_count - 1);
    ++counts[idx];
  }
  h.densities.resize(bin_count);
  const double n = static_cast<double>(s.size());
  h.f_max = 0.0;
  for (int i = 0; i < bin_count; ++i) {
    const double w = h.bin_edges[i + 1] - h.bin_edges[i];
    h.densities[i] = counts[i] / (n * w);
    h.f_max = std::max(h.f_max, h.densities[i]);
  }
  return h;
}

}  // namespace

HistogramDensity histogram_density(const EmpiricalDistribution& dist) {
  if (dist.size() < 100) {
    throw TooFewSamples("Freedman-Diaconis binning needs at least 100 samples");
  }
  const std::vector<double>& s = dist.samples();
  const std::size_t n = s.size();
  const double q25 = s[static_cast<std::size_t>(0.25 * (n - 1))];
  const double q75 = s[static_cast<std::size_t>(0.75 * (n - 1))];
  const double iqr = q75 - q25;
  const double span = s.back() - s.front();
  double width = 2.0 * iqr * std::pow(static_cast<double>(n), -1.0 / 3.0);
  int bins;
  if (width <= 0.0 || span <= 0.0) {
    bins = 1;
  } else {
    bins = static_cast<int>(std::ceil(span / width));
    bins = std::max(1, std::min(bins, 100000));
  }
  return build_histogram(dist, bins, width);
}

HistogramDensity histogram_density(const EmpiricalDistribution& dist, int bin_count) {
  if (bin_count < 1) {
    throw ConfigError("histogram bin count must be at least 1");
  }
  return build_histogram(dist, bin_count, 0.0);
}

void HistogramDensity::write_csv(std::ostream& os) const {
  os << "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < densities.size(); ++i) {
    os << format_double(bin_edges[i]) << ',' << format_double(bin_edges[i + 1]) << ','
       << format_double(densities[i]) << '\n';
  }
}

double dkw_epsilon(std::size_t m, double delta) {
  if (m == 0) throw TooFewSamples("DKW bound needs at least one sample");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("DKW confidence level delta must lie in (0, 1)");
  }
  return std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(m)));
}

}  // namespace dlqr
