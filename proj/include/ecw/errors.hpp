#ifndef ECW_ERRORS_HPP
#define ECW_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecw {

/// A size limit (node cap, exact-arithmetic cap) would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& what, std::size_t requested, std::size_t limit)
      : std::runtime_error(what + ": requested " + std::to_string(requested) + ", limit " +
                           std::to_string(limit)),
        requested_(requested),
        limit_(limit) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t requested_;
  std::size_t limit_;
};

/// A numerical computation produced a result outside its tolerance, or an
/// internal invariant (nullspace dimension, nonsingularity) did not hold.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecw

#endif  // ECW_ERRORS_HPP
