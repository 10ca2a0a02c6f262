#pragma once

namespace ngmining {

/// Principal branch W0 of the Lambert W function: returns y >= -1 with
/// y * exp(y) == x. Domain is x >= -1/e (a small absolute slack of 1e-15
/// is tolerated at the branch point); throws std::domain_error otherwise.
/// Throws std::runtime_error if the iteration fails to converge.
double lambert_w0(double x);

/// W0(exp(s)) evaluated stably for any real s, including s large enough
/// that exp(s) overflows a double. Needed by the closed-form optimal
/// mining durations, whose W arguments grow exponentially in the mint
/// reward.
double lambert_w0_exp(double s);

}  // namespace ngmining
