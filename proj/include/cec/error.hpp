#ifndef CEC_ERROR_HPP
#define CEC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cec {

/// Invalid configuration or arguments (bad k, mismatched parameter arity, unknown names).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Problems with the input data itself (parse errors, too few points).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures: singular matrices, degenerate clusters that cannot be recovered.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cec

#endif  // CEC_ERROR_HPP
