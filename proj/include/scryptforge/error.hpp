#pragma once

#include <stdexcept>
#include <cstddef>
#include <string>
#include <utility>

namespace scryptforge {

// Base of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the operation's documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Buffer of the wrong length handed to a fixed-size codec.
class InputSizeError : public ParameterError {
 public:
  InputSizeError(const std::string& what, std::size_t expected, std::size_t got)
      : ParameterError(what + ": expected " + std::to_string(expected) +
                       " bytes, got " + std::to_string(got)) {}
};

// Streaming object used after it was finalized.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed data file or text encoding. key() names the offending field.
class FormatError : public Error {
 public:
  FormatError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// A memory technology lacks the latency figure an operation needs.
class NotQuantifiableError : public Error {
 public:
  NotQuantifiableError(std::string technology, const std::string& what)
      : Error(technology + ": " + what), technology_(std::move(technology)) {}
  const std::string& technology() const noexcept { return technology_; }

 private:
  std::string technology_;
};

class EnvironmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace scryptforge
