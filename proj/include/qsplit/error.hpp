#pragma once

#include <stdexcept>
#include <string>

namespace qsplit {

// Malformed or inconsistent input: wrong shapes, out-of-range indices,
// unparsable files. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  InputError(std::string kind, const std::string& what);
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// A well-formed input that fails a mathematical property. `kind` names the
// failed property (e.g. "NotAssociative"), the message carries a witness.
// The CLI maps these to exit code 1.
class MathError : public std::runtime_error {
 public:
  MathError(std::string kind, const std::string& what);
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace qsplit
