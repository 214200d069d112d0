#pragma once

#include <stdexcept>
#include <string>

namespace spinsq {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A matrix failed its Hermitian / anti-Hermitian tag check.
class TagError : public Error {
public:
    using Error::Error;
};

/// An input vector or state violates a normalization or unit-length invariant.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A denominator in one of the closed-form expressions vanishes.
class ZeroDenominator : public Error {
public:
    using Error::Error;
};

/// A denominator in the z-alignment amplitude formulas vanishes.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

} // namespace spinsq
