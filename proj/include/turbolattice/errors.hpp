/*
   Copyright 2026 The turbolattice Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TURBOLATTICE_ERRORS_HPP
#define TURBOLATTICE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace turbolattice {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong lengths, bad text formats, violated preconditions.
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// A configuration document could not be interpreted.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// r(x) shares a factor with x^L - 1, so the inverse modulo x^L - 1 does not exist.
/// `row()` names the offending generator row when known.
class NotCoprime : public Error {
   public:
    explicit NotCoprime(const std::string& what, std::size_t row = npos) : Error(what), row_(row) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t row() const noexcept { return row_; }

   private:
    std::size_t row_;
};

/// A randomized or combinatorial construction gave up (e.g. S-random retries exhausted).
class ConstructionFailed : public Error {
   public:
    using Error::Error;
};

/// An exhaustive computation would exceed its configured budget.
class BudgetExceeded : public Error {
   public:
    using Error::Error;
};

}  // namespace turbolattice

#endif
