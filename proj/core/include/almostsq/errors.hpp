#pragma once

#include <stdexcept>

namespace almostsq {

/// A search ran to completion without any admissible candidate.
class NoCandidate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few usable data points for a fit.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace almostsq
