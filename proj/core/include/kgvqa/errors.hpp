#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kgvqa {

// Root of every error thrown by the library. Callers that only care about
// "something went wrong in stage X" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed us something malformed (bad synset id, bad depth, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Backend could not be reached. Never used to mean "no result".
class TransportError : public Error {
 public:
  using Error::Error;
};

// A data file parsed but violates a schema rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class MissingClassError : public Error {
 public:
  using Error::Error;
};

class PathInvalidError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed. what() starts with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace kgvqa
