#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riesz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's documented domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The requested quantity does not exist (divergent integral, pole, singular point).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Configuration contains two coincident points under a singular kernel.
class InfiniteEnergy : public Error {
public:
    InfiniteEnergy(std::size_t i, std::size_t j)
        : Error("infinite energy: points " + std::to_string(i) + " and " +
                std::to_string(j) + " coincide"),
          first(i), second(j) {}

    std::size_t first;
    std::size_t second;
};

/// All polynomial coefficients vanish (probability zero under the ensemble).
class DegenerateSample : public Error {
public:
    using Error::Error;
};

class RootFinderFailure : public Error {
public:
    RootFinderFailure(const std::string& what, int iterations, double worst_backward_error)
        : Error(what + " (iterations=" + std::to_string(iterations) +
                ", worst backward error=" + std::to_string(worst_backward_error) + ")"),
          iterations(iterations), worst_backward_error(worst_backward_error) {}

    int iterations;
    double worst_backward_error;
};

}  // namespace riesz
