#pragma once

#include <stdexcept>
#include <string>

namespace sccnn {

// Malformed input data, bad file formats, contract violations on user-supplied
// values. CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite losses or gradients, failed numeric checks. CLI maps this to
// exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sccnn
