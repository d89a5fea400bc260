#pragma once

#include <stdexcept>
#include <string>

namespace quadfr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularVandermonde : public Error {
 public:
  using Error::Error;
};

class OrbitOverflow : public Error {
 public:
  using Error::Error;
};

class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

class BasisNotClosed : public Error {
 public:
  using Error::Error;
};

class RankDeficiency : public Error {
 public:
  using Error::Error;
};

class SpanMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnstableScheme : public Error {
 public:
  UnstableScheme(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class DivergedError : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

}  // namespace quadfr
