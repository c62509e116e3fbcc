#ifndef PHDIM_BOUNDS_HPP
#define PHDIM_BOUNDS_HPP

#include <cmath>
#include <cstdint>

#include "phdim/errors.hpp"

namespace phdim {

/// Constants of the trajectory generalization bound.
struct BoundInputs {
  double loss_bound = 1.0;       ///< B: the loss lies in [0, B]
  double lipschitz = 1.0;        ///< L: Lipschitz constant of the loss in w
  double n = 1.0;                ///< number of training samples
  double decoupling = 1.0;       ///< M >= 1
  double gamma = 0.05;           ///< failure probability, in (0, 7M]
  double dim_ph = 0.0;           ///< PH dimension of the trajectory

  void validate() const {
    if (!(loss_bound > 0.0)) throw InvalidInput("B must be positive");
    if (!(lipschitz > 0.0)) throw InvalidInput("L must be positive");
    if (!(n > 0.0)) throw InvalidInput("n must be positive");
    if (!(decoupling >= 1.0)) throw InvalidInput("M must be >= 1");
    if (!(gamma > 0.0 && gamma <= 7.0 * decoupling)) throw InvalidInput("gamma must lie in (0, 7M]");
    if (!(dim_ph >= 0.0)) throw InvalidInput("dim_ph must be non-negative");
    if (!(n * lipschitz * lipschitz > 1.0)) throw InvalidInput("bound needs n L^2 > 1");
  }
};

/// 2B sqrt( (dim_ph + 1) log^2(n L^2) / n + log(7M / gamma) / n ), holding
/// with probability at least 1 - gamma over the training sample.
inline double generalization_bound(const BoundInputs& in) {
  in.validate();
  const double log_nl2 = std::log(in.n * in.lipschitz * in.lipschitz);
  const double complexity = (in.dim_ph + 1.0) * log_nl2 * log_nl2 / in.n;
  const double confidence = std::log(7.0 * in.decoupling / in.gamma) / in.n;
  return 2.0 * in.loss_bound * std::sqrt(complexity + confidence);
}

}  // namespace phdim

#endif  // PHDIM_BOUNDS_HPP
