#pragma once

#include <stdexcept>
#include <string>

namespace symjunta {

enum class ErrorKind {
  arity,             // argument sizes disagree (function arity vs assignment length)
  out_of_range,      // an index or parameter outside its documented domain
  resource,          // a configured cap would be exceeded
  invalid_argument,  // malformed input (non-prime modulus, gcd(M,a) != 1, bad delta, ...)
  fit,               // no polynomial of the requested degree matches the samples
  budget,            // example budget exhausted before a weight class was observed
  unavailable,       // a certificate could not be built on the searched interval
  diagnostic,        // the learner could not explain the oracle
  parse,             // textual input could not be parsed
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace symjunta
