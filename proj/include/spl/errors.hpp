#pragma once

#include <stdexcept>
#include <string>

namespace spl {

// Requested work exceeds a configured limit (sieve range, table size, ...).
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A certified numerical tolerance could not be met at the requested settings.
// Carries the bound that was actually achieved.
class precision_error : public std::runtime_error {
 public:
  precision_error(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace spl
