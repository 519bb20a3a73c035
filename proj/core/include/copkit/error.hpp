#ifndef COPKIT_ERROR_HPP_
#define COPKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace copkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// quantile(0) or quantile(1) of a margin whose support is unbounded on
/// that side.
class InfiniteQuantileError : public DomainError
{
public:
    using DomainError::DomainError;
};

/// A sample of size zero was requested.
class EmptySampleError : public Error
{
public:
    using Error::Error;
};

/// Input data (samples, CSV rows, datasets) could not be ingested.
class IngestionError : public Error
{
public:
    using Error::Error;
};

/// Arguments are valid individually but given in the wrong order.
class OrderError : public Error
{
public:
    using Error::Error;
};

/// Vector length does not match the object's dimension.
class ShapeError : public Error
{
public:
    using Error::Error;
};

/// The operation is only defined for some dimensions.
class UnsupportedDimensionError : public Error
{
public:
    using Error::Error;
};

/// A copula without a density was asked for one.
class SingularFamilyError : public Error
{
public:
    using Error::Error;
};

/// Quadrature resolution below the supported minimum.
class ResolutionError : public Error
{
public:
    using Error::Error;
};

/// An internal invariant failed beyond rounding tolerance.
class ConsistencyError : public Error
{
public:
    using Error::Error;
};

}

#endif // COPKIT_ERROR_HPP_
