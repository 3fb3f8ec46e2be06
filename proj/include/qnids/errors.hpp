// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy used by the pipeline and the command-line tool: data errors
// (bad files, malformed columns, impossible splits) versus numerical
// failures (non-finite losses, singular matrices).  The CLI maps these to
// distinct exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace qnids {

struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qnids
