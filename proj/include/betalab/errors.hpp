#ifndef BETALAB_ERRORS_HPP
#define BETALAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace betalab {

// Domain/validation failures (bad input, C1/C2 violations, out-of-range
// arguments). CLI maps these to exit code 1.
class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Accuracy failures (quadrature non-convergence, loss of orthogonality,
// MCMC mixing problems). CLI maps these to exit code 2.
class precision_error : public std::runtime_error {
public:
  explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace betalab

#endif
