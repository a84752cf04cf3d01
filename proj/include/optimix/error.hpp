#ifndef OPTIMIX_ERROR_HPP
#define OPTIMIX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace optimix {

/// Raised on precondition violations: dimension mismatches, invalid model
/// specifications, malformed bounds or priors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optimix

#endif  // OPTIMIX_ERROR_HPP
