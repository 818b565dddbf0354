#pragma once

#include <stdexcept>
#include <string>

namespace paseig {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: config files, CLI values, inconsistent run parameters.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// A numerical kernel detected a state it cannot recover from.
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(what) {}
};

// NaN/Inf showed up where finite arithmetic was required.
struct NonFiniteError : NumericalError {
    explicit NonFiniteError(const std::string& what) : NumericalError(what) {}
};

// Cholesky of a mass (or otherwise SPD-by-contract) matrix failed.
struct NotSpdError : NumericalError {
    explicit NotSpdError(const std::string& what) : NumericalError(what) {}
};

// The augmentation direction is numerically contained in the coarse space.
struct DegenerateSpaceError : NumericalError {
    explicit DegenerateSpaceError(const std::string& what) : NumericalError(what) {}
};

// A dense solve was requested above the configured dimension cap.
struct DenseCapError : Error {
    explicit DenseCapError(const std::string& what) : Error(what) {}
};

// A mesh hierarchy would exceed the configured memory budget.
struct MemoryCapError : Error {
    explicit MemoryCapError(const std::string& what) : Error(what) {}
};

} // namespace paseig
