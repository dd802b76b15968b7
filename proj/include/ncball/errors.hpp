#pragma once

#include <stdexcept>
#include <string>

namespace ncball {

// Dimension or argument mismatches are reported with std::invalid_argument.
// NumericalError signals a numerical failure (eigensolver breakdown,
// singular similarity, a block identity violated beyond tolerance).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ncball
