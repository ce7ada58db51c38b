#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace icm {

// Base for every failure raised by the library. Callers that only need a
// message can catch this; the derived types carry structured context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed XML, with 1-based position of the offending character.
class XmlError : public Error {
 public:
  XmlError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class PomErrorKind {
  MalformedXml,
  NotAPom,
  IncompleteCoordinates,
  UnresolvedProperty,
};

inline const char* to_string(PomErrorKind kind) {
  switch (kind) {
    case PomErrorKind::MalformedXml: return "malformed xml";
    case PomErrorKind::NotAPom: return "not a pom";
    case PomErrorKind::IncompleteCoordinates: return "incomplete coordinates";
    case PomErrorKind::UnresolvedProperty: return "unresolved property";
  }
  return "unknown";
}

class PomError : public Error {
 public:
  PomError(PomErrorKind kind, const std::string& detail, std::size_t line = 0,
           std::size_t column = 0)
      : Error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        line_(line),
        column_(column) {}

  PomErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  PomErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
};

// A JSON document that does not match the expected schema. `path` is a
// jq-style location such as `.manifests[0].group`.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& detail)
      : Error("schema error at " + path + ": " + detail), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class HistoryError : public Error {
 public:
  HistoryError(std::size_t line, const std::string& detail)
      : Error("releases.csv line " + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace icm
