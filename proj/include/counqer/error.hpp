#pragma once

#include <stdexcept>
#include <string>

namespace counqer {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad flag, bad config key).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage needs an artifact that an earlier stage has not written.
class MissingArtifact : public Error {
 public:
  MissingArtifact(const std::string& stage, const std::string& path)
      : Error(stage + " artifacts missing: " + path), stage_(stage), path_(path) {}

  const std::string& stage() const { return stage_; }
  const std::string& path() const { return path_; }

 private:
  std::string stage_;
  std::string path_;
};

}  // namespace counqer
