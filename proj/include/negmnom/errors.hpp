#pragma once

#include <stdexcept>
#include <string>

namespace negmnom {

// Root of every exception thrown by the library. The CLI maps all of these
// to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Engineering limits (n, |T|, degree cap, coefficient budget).
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

class NoPositiveRoot : public Error {
 public:
  using Error::Error;
};

class DegenerateModel : public Error {
 public:
  using Error::Error;
};

// A distribution was requested at a shift point outside the domain of the
// Laplace transform, or for a model failing the divisibility criterion.
class DomainRejected : public Error {
 public:
  DomainRejected(const std::string& what, double margin)
      : Error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

class ExcessTailMass : public Error {
 public:
  ExcessTailMass(const std::string& what, double tail)
      : Error(what), tail_(tail) {}
  double tail() const { return tail_; }

 private:
  double tail_;
};

}  // namespace negmnom
