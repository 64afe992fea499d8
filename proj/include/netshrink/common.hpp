#ifndef NETSHRINK_COMMON_HPP
#define NETSHRINK_COMMON_HPP

#include <stdexcept>
#include <string>

namespace netshrink {

inline constexpr const char* kVersion = "0.1.0";

// Bad or inconsistent input data (files, indices, parameter ranges).
// The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown (non-convergence, overflow to non-finite values).
// The CLI maps this to exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netshrink

#endif
