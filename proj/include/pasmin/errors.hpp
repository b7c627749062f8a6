#pragma once

#include <stdexcept>
#include <string>

namespace pasmin {

/// Raised by the unregularized solve path when the moment matrix is not
/// numerically positive definite. Callers recover by supplying a ridge > 0.
class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

/// The two-stage minimum-value estimator requires an even sample size; the
/// caller must drop a point explicitly rather than have one dropped silently.
class OddSampleSize : public std::runtime_error {
 public:
  explicit OddSampleSize(const std::string& what) : std::runtime_error(what) {}
};

/// Rate fitting works on log(risk); a non-positive risk has no logarithm.
class NonPositiveRisk : public std::runtime_error {
 public:
  explicit NonPositiveRisk(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed tabular input. The message names the first offending row.
class CsvError : public std::runtime_error {
 public:
  explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (plan files, CLI flag combinations, scenario specs).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pasmin
