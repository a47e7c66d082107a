#pragma once

#include <stdexcept>
#include <string>

namespace gemlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed group spec; the message names the offending token.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedKindError : public Error {
 public:
  using Error::Error;
};

/// An element (or byte string) is not valid for the group it was used with.
class DomainError : public Error {
 public:
  using Error::Error;
};

class CodecError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a fixed resource cap (enumeration, exhaustive search).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or algorithm configuration (zero trials, empty chain, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An adversary exceeded its query budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// An adversary asked a query whose answer it could already derive.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace gemlab
