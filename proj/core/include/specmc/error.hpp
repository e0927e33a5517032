/*
 * Copyright 2026 The specmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPECMC_ERROR_HPP
#define SPECMC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace specmc
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

class IndexOutOfRange : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "index_out_of_range"; }
};

/// The chain has no closed-form residual kernel, so it cannot be split.
class SplittingUnavailable : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "splitting_unavailable"; }
};

/// A declared minorization P^m(x, .) >= delta nu(.) was contradicted at runtime.
class MinorizationViolated : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "minorization_violated"; }
};

/// An iterative numerical routine did not reach its tolerance.
class NonConvergence : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "non_convergence"; }
};

/// Configuration error; `key()` names the offending dotted key path.
class ConfigError : public Error
{
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }
    const char* kind() const noexcept override { return "config_error"; }

private:
    std::string key_;
};

class IoError : public Error
{
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io_error"; }
};

}  // namespace specmc

#endif  // SPECMC_ERROR_HPP
