#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topoinfer {

// Wrong coordinate count, or a point off the ambient constraint surface.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The query point is on (or too close to) the medial axis, or outside the reach.
class AmbiguousProjection : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The curvature factor 1 - s r^2 / (6(m+2)) is not positive.
class VacuousBound : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SimplexBudgetExceeded : public std::runtime_error {
 public:
  explicit SimplexBudgetExceeded(std::size_t budget)
      : std::runtime_error("simplex budget of " + std::to_string(budget) + " exceeded"),
        budget_(budget) {}
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string{}) +
                           ": " + what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace topoinfer
