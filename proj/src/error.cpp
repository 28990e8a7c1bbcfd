#include "qsplit/error.hpp"

#include <utility>

namespace qsplit {

InputError::InputError(std::string kind, const std::string& what)
    : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

MathError::MathError(std::string kind, const std::string& what)
    : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

}  // namespace qsplit
