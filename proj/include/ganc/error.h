// Copyright 2026 The GANC Authors.
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

#ifndef GANC_ERROR_H_
#define GANC_ERROR_H_

#include <stdexcept>
#include <string>

namespace ganc {

// Error hierarchy. The CLI maps the three families onto exit codes:
// ArgumentError -> 1, DataError -> 2, NumericalError/ContractError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : DataError(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDatasetError : public DataError {
 public:
  using DataError::DataError;
};

class LookupError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// An artifact was produced from a different split than the one supplied.
class StaleArtifactError : public DataError {
 public:
  using DataError::DataError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UndefinedMetricError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

// Not enough candidate items to fill a top-N list.
class InfeasibleError : public ContractError {
 public:
  using ContractError::ContractError;
};

}  // namespace ganc

#endif  // GANC_ERROR_H_
