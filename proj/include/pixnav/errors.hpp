#pragma once

#include <stdexcept>
#include <string>

namespace pixnav {

/// Argument outside an operation's domain (bad pixel, mismatched dimensions...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BehindCameraError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateDirectionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Camera placed inside solid geometry.
class InvalidPoseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scene document.
class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// External policy process failed (spawn, protocol, timeout).
class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pixnav
