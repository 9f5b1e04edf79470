#include "kinetic/errors.hpp"

#include <utility>

namespace kinetic {

EpsilonTooLarge::EpsilonTooLarge(double eps_, double eps_max_)
    : Error("eps = " + std::to_string(eps_) + " is not below eps_max = " +
            std::to_string(eps_max_)),
      eps(eps_),
      eps_max(eps_max_) {}

ParseError::ParseError(std::size_t line_, const std::string& what)
    : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}

ValidationError::ValidationError(std::string key_, const std::string& reason)
    : Error(key_ + ": " + reason), key(std::move(key_)) {}

}  // namespace kinetic
