#ifndef TOPODEF_ERRORS_HPP
#define TOPODEF_ERRORS_HPP

#include <atomic>
#include <iostream>
#include <stdexcept>
#include <string>

namespace topodef {

// A field was evaluated where it has no defined value (vortex core,
// hedgehog origin, Higgs zero). Integrators catch this to apply exclusion
// balls; callers that hit it by accident get a readable message.
class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Discretisation cannot deliver the requested accuracy (undersampled
// contour, CFL violation, truncated domain).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace diag {

inline std::atomic<bool>& verbose() {
  static std::atomic<bool> flag{false};
  return flag;
}

inline std::atomic<long>& renormalisations() {
  static std::atomic<long> count{0};
  return count;
}

inline void note(const std::string& msg) {
  if (verbose().load()) std::clog << "[topodef] " << msg << '\n';
}

}  // namespace diag
}  // namespace topodef

#endif
