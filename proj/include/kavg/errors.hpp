#pragma once

#include <stdexcept>
#include <string>

namespace kavg {

// A parameter outside its mathematical domain (k < 2, index out of range, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact computation was requested beyond the size it is guarded for.
class ScaleError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base of every configuration failure. key() names the offending entry when
// there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class ConfigFileError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ConfigSyntaxError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ConfigValueError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace kavg
