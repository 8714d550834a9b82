// core/include/stt/error.h

// Copyright 2026  The STT Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STT_ERROR_H_
#define STT_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace stt {

// Base class of all recoverable toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed files, shape mismatches (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The label sequence admits no alignment for the given number of frames.
// Deliberately distinct from an infinite loss: callers must handle it.
class NoAlignmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Non-finite values where finite ones are required (CLI exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

template <typename... Args>
std::string msg_cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace stt

#define STT_CHECK(cond, ...)                                    \
  do {                                                          \
    if (!(cond)) {                                              \
      throw ::stt::ValidationError(::stt::msg_cat(__VA_ARGS__)); \
    }                                                           \
  } while (0)

#endif  // STT_ERROR_H_
