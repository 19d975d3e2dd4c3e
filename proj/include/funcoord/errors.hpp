#pragma once

#include <stdexcept>
#include <string>

namespace funcoord {

/// Base class for all library failures that are not plain argument misuse.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operator that must be invertible is numerically singular.
class singular_error : public error {
public:
    using error::error;
};

/// A kernel or metric that must be positive definite is not.
class indefinite_error : public error {
public:
    explicit indefinite_error(const std::string& what, double most_negative)
        : error(what), most_negative_eigenvalue(most_negative) {}
    double most_negative_eigenvalue = 0.0;
};

/// A grid is too coarse to resolve the requested object (mollifier, path).
class resolution_error : public error {
public:
    using error::error;
};

/// The dense eigensolver failed (defective or non-converged matrix).
class solver_error : public error {
public:
    using error::error;
};

}  // namespace funcoord
