#pragma once

#include <stdexcept>
#include <string>

namespace bellforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScenarioMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration or symbolic expansion exceeds its configured cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

// A term outside the computable (one setting per party) subspace survived.
class NonComputable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bellforge
