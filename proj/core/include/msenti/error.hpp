// Copyright 2026 The msenti Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSENTI_ERROR_HPP
#define MSENTI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace msenti {

/// Base of every exception thrown by the library. Callers that only care
/// about "the input was bad" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input data violated a documented format or precondition.
class InputError : public Error {
public:
    using Error::Error;
};

/// A serialized checkpoint is malformed, truncated or of an unsupported version.
class FormatError : public Error {
public:
    using Error::Error;
};

/// An internal invariant was violated (shape disagreement, stale trace,
/// non-finite values escaping a kernel). Indicates a bug or misuse rather
/// than bad user data.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Training diverged: a loss or gradient became NaN or infinite.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace msenti

#endif // MSENTI_ERROR_HPP
