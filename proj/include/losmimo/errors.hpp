// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace losmimo {

/// Invalid scenario or argument value. Carries the violated constraint in what().
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gram matrix of a channel realization is numerically rank deficient.
class SingularChannelError : public std::runtime_error {
 public:
  SingularChannelError(std::size_t pivot, double value)
      : std::runtime_error("singular channel: Cholesky pivot " + std::to_string(pivot) +
                           " = " + std::to_string(value) + " below tolerance"),
        pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// Too many degenerate (singular) trials in a Monte-Carlo run.
class DegenerateTrialsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace losmimo
