// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace winnbeta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input files.
class IngestionError : public Error {
public:
    using Error::Error;
};

/// Unknown metabolite, plate or scenario name.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Bad parameter combination (lags too large, df grid empty, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input for which a statistic is undefined (zero variance, all ties).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A plate with zero spread where a per-plate scale is required.
class DegeneratePlateError : public DegenerateError {
public:
    DegeneratePlateError(const std::string& plate, const std::string& what)
        : DegenerateError(what), plate_(plate) {}
    [[nodiscard]] const std::string& plate() const noexcept { return plate_; }

private:
    std::string plate_;
};

/// Missing cells under a policy that forbids them.
class MissingDataError : public Error {
public:
    using Error::Error;
};

/// Group too small for a variance or location test.
class GroupSizeError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient regression design.
class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace winnbeta
