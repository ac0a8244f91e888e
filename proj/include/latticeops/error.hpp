#ifndef LATTICEOPS_ERROR_HPP
#define LATTICEOPS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace latticeops {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (bad lattice constants, q <= 0, unknown tag, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

/// The exact backend cannot represent a value (e.g. an irrational square root).
class NotRepresentable : public Error {
 public:
  using Error::Error;
};

/// A moment functional does not carry enough moments for the requested operation.
class HorizonExhausted : public Error {
 public:
  HorizonExhausted(std::size_t needed, std::size_t available)
      : Error("moment horizon exhausted: need degree " + std::to_string(needed) +
              ", functional carries moments up to degree " + std::to_string(available)),
        needed_(needed),
        available_(available) {}

  std::size_t needed() const noexcept { return needed_; }
  std::size_t available() const noexcept { return available_; }

 private:
  std::size_t needed_;
  std::size_t available_;
};

/// Some d_n vanished: the Pearson pair is not admissible at index n.
class AdmissibilityFailure : public Error {
 public:
  explicit AdmissibilityFailure(long n)
      : Error("pair is not admissible: d_" + std::to_string(n) + " = 0"), n_(n) {}
  long index() const noexcept { return n_; }

 private:
  long n_;
};

/// A functional (or recurrence) is not regular at the given level.
class NotRegular : public Error {
 public:
  NotRegular(long n, const std::string& why)
      : Error("not regular at n=" + std::to_string(n) + ": " + why), n_(n) {}
  long level() const noexcept { return n_; }

 private:
  long n_;
};

/// Two independent evaluation routes disagreed.
class ConsistencyFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace latticeops

#endif  // LATTICEOPS_ERROR_HPP
