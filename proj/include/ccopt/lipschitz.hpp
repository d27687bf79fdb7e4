#pragma once

#include "ccopt/error.hpp"

namespace ccopt {

/// Lipschitz constants of c, its Jacobian, h and g (all w.r.t. the l2 norm).
struct LipschitzData {
  double L_c = 0.0;
  double L_cprime = 0.0;
  double L_h = 0.0;
  double L_g = 0.0;

  /// Lipschitz constant of x -> Delta^C_delta f(x): L_h(2 L_c + delta L_c') + 2 L_g.
  double delta_constant(double delta) const { return L_h * (2.0 * L_c + delta * L_cprime) + 2.0 * L_g; }
};

inline double lipschitz_delta_bound(const LipschitzData& data, double delta) {
  detail::require(data.L_c >= 0 && data.L_cprime >= 0 && data.L_h >= 0 && data.L_g >= 0 && delta >= 0,
                  ErrorCode::InvalidArgument, "Lipschitz constants and delta must be nonnegative");
  return data.delta_constant(delta);
}

}  // namespace ccopt
