// Copyright 2026 The occam-icl Authors.
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

#ifndef OCCAM_NUMERICS_ERRORS_HPP_
#define OCCAM_NUMERICS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace occam {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Gram matrix that should be positive definite is numerically singular.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw n-gram prediction requested for a context with no observed successor.
class UnseenContextError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every hypothesis in a posterior has zero likelihood or zero prior.
class DegenerateEvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text or token stream does not follow the expected grammar.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace occam

#endif  // OCCAM_NUMERICS_ERRORS_HPP_
