#ifndef FCSLAB_ERRORS_HPP
#define FCSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fcslab {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed inputs: dimension mismatches, non-Hermitian matrices, bad
// parameters. Messages name the offending field.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Mathematically undefined requests (function of an eigenvalue outside the
// domain, singular operator where an inverse is needed).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Problem size exceeds a configured cap.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what) {}
};

// Unreadable or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace fcslab

#endif
