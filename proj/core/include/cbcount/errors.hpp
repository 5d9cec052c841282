#pragma once

#include <stdexcept>
#include <string>

namespace cbcount {

/// Malformed or semantically invalid input (config, arguments, data).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not reach the requested tolerance.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double best_estimate, double achieved)
      : std::runtime_error(what), best_estimate_(best_estimate), achieved_(achieved) {}

  double best_estimate() const { return best_estimate_; }
  double achieved() const { return achieved_; }

 private:
  double best_estimate_;
  double achieved_;
};

/// An internal consistency check failed (e.g. two counting strategies disagree).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cbcount
