#pragma once

#include <stdexcept>
#include <string>

namespace spirallax {

enum class ErrorKind { validation, numeric };

struct Error : std::runtime_error {
  Error(const std::string& what, ErrorKind k) : std::runtime_error(what), kind(k) {}
  ErrorKind kind;
};

// Validation failures: malformed input, bad N, bad index.
struct InvalidN : Error {
  explicit InvalidN(int n)
      : Error("N = " + std::to_string(n) +
                  " is not allowed: need N >= 5 and N != 3s+1 (the lift is unique only for N mod 3 != 1)",
              ErrorKind::validation),
        n(n) {}
  int n;
};

struct InvalidSeed : Error {
  explicit InvalidSeed(const std::string& w) : Error("invalid seed: " + w, ErrorKind::validation) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& w) : Error("invalid input: " + w, ErrorKind::validation) {}
};

struct IndexOutOfRange : Error {
  IndexOutOfRange(const std::string& where, long i)
      : Error(where + ": index " + std::to_string(i) + " out of range", ErrorKind::validation), index(i) {}
  long index;
};

// Numeric failures.
struct DegenerateConfiguration : Error {
  explicit DegenerateConfiguration(const std::string& w, long i = 0, bool has_index = false)
      : Error(has_index ? "degenerate configuration at index " + std::to_string(i) + ": " + w
                        : "degenerate configuration: " + w,
              ErrorKind::numeric),
        index(i), indexed(has_index) {}
  long index;
  bool indexed;
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& w) : Error("singular matrix: " + w, ErrorKind::numeric) {}
};

struct NotLiftable : Error {
  explicit NotLiftable(int n)
      : Error("no unique canonical lift for N = " + std::to_string(n) + " (N = 3s+1)", ErrorKind::numeric) {}
};

struct IllConditioned : Error {
  explicit IllConditioned(const std::string& w) : Error("ill-conditioned: " + w, ErrorKind::numeric) {}
};

struct GenericityViolation : Error {
  explicit GenericityViolation(const std::string& w) : Error("genericity violation: " + w, ErrorKind::numeric) {}
};

struct NonDivisible : Error {
  explicit NonDivisible(const std::string& w) : Error("inexact Laurent division: " + w, ErrorKind::numeric) {}
};

}  // namespace spirallax
