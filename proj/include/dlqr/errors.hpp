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

#ifndef DLQR_ERRORS_HPP_
#define DLQR_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlqr {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape / size incompatibilities detected at construction time.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The closed loop is not stable in the discounted sense
// (spectral radius of sqrt(gamma)*A_K >= 1 - margin).
class NotStable : public Error {
 public:
  using Error::Error;
};

// An iterative solver exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Riccati iterates diverged: no stabilizing solution exists.
class NotStabilizable : public Error {
 public:
  using Error::Error;
};

// The Kronecker system is numerically singular (condition number > 1e14).
class IllConditioned : public Error {
 public:
  using Error::Error;
};

// NaN or Inf where a finite value is required.
class NonFinite : public Error {
 public:
  using Error::Error;
};

// Operation requires an absolutely continuous distribution.
class DegenerateDistribution : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

// Bound formulas that assume a centered disturbance reject nonzero means.
class NonZeroMean : public Error {
 public:
  using Error::Error;
};

// The spectral norm of the closed loop is >= 1, so the norm-based bound
// formulas do not apply (distinct from instability: the spectral radius
// may still be < 1 and sampling remains well defined).
class NormTooLarge : public Error {
 public:
  using Error::Error;
};

// A simulated trajectory left the numerical safety region.
class TrajectoryOverflow : public Error {
 public:
  TrajectoryOverflow(const std::string& what, std::size_t trajectory_index)
      : Error(what), trajectory_index(trajectory_index) {}
  std::size_t trajectory_index;
};

// Requested accuracy is below the irreducible truncation error.
class TargetTooSmall : public Error {
 public:
  using Error::Error;
};

// A bound's applicability condition (such as l > 2*epsilon) failed.
class BoundNotApplicable : public Error {
 public:
  using Error::Error;
};

// Scenario file / CLI configuration problems.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dlqr

#endif  // DLQR_ERRORS_HPP_
