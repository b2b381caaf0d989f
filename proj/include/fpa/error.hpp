#pragma once

#include <stdexcept>
#include <string>

namespace fpa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter or parameter combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input vector has the wrong length for the objective or problem.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Non-finite coordinate encountered where a finite one is required.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

class PopulationTooSmallError : public Error {
public:
    using Error::Error;
};

class DistinctnessError : public Error {
public:
    using Error::Error;
};

/// Unknown benchmark name.
class LookupError : public Error {
public:
    using Error::Error;
};

class AggregationError : public Error {
public:
    using Error::Error;
};

class ComparisonError : public Error {
public:
    using Error::Error;
};

class PlotError : public Error {
public:
    using Error::Error;
};

/// File-system failure; the message always carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fpa
