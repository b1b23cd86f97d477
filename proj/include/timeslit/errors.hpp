/* Copyright 2026 The timeslit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace timeslit {

/// Error classes; the CLI maps each to a documented exit code.
enum class ErrorClass { config, resolution, domain, io };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ErrorClass error_class() const noexcept = 0;
  virtual const char* class_name() const noexcept = 0;
};

class DomainError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::domain; }
  const char* class_name() const noexcept override { return "DomainError"; }
};

/// A propagator was asked for its value at zero evolution parameter.
class SingularKernel : public DomainError {
 public:
  using DomainError::DomainError;
  const char* class_name() const noexcept override { return "SingularKernel"; }
};

/// Fewer than two fringe peaks were found in a trace.
class NoFringes : public DomainError {
 public:
  using DomainError::DomainError;
  const char* class_name() const noexcept override { return "NoFringes"; }
};

/// A grid cannot resolve the packet or the kernel phase.
class ResolutionError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::resolution; }
  const char* class_name() const noexcept override { return "ResolutionError"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::config; }
  const char* class_name() const noexcept override { return "ConfigError"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::io; }
  const char* class_name() const noexcept override { return "IoError"; }
};

/// Process exit status for an error class: 2 config, 3 resolution, 4 domain, 5 I/O.
constexpr int exit_code(ErrorClass c) noexcept {
  switch (c) {
    case ErrorClass::config: return 2;
    case ErrorClass::resolution: return 3;
    case ErrorClass::domain: return 4;
    case ErrorClass::io: return 5;
  }
  return 1;
}

}  // namespace timeslit
