#pragma once

#include <stdexcept>
#include <string>

namespace cubical {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  int line;
  ParseError(int line_, const std::string& msg)
      : Error("parse error (line " + std::to_string(line_) + "): " + msg), line(line_) {}
};

struct NotComposable : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct IllTyped : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct DifferentSources : Error {
  using Error::Error;
};

struct NotNoetherian : Error {
  using Error::Error;
};

struct NotConfluent : Error {
  using Error::Error;
};

struct NotConvergent : Error {
  using Error::Error;
};

struct MissingGenerator : Error {
  using Error::Error;
};

struct FoldMismatch : Error {
  using Error::Error;
};

struct InvalidSection : Error {
  using Error::Error;
};

struct InvalidSquare : Error {
  using Error::Error;
};

}  // namespace cubical
