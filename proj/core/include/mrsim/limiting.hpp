#pragma once

#include <cmath>

namespace mrsim {

/// Classic junction-voltage limiter. Caps fast-growing proposals on an
/// exponential characteristic by pulling the new point back onto a
/// logarithmic trajectory from the old one.
inline double pnjlim(double xnew, double xold, double vt, double xcrit) {
    if (xnew > xcrit && xnew - xold > 2.0 * vt) {
        return xold + vt * std::log1p((xnew - xold) / vt);
    }
    return xnew;
}

/// Limiter for sinh-type characteristics: linearize sinh(k*x) at xold,
/// evaluate the linearization at xnew, and return the argument that the
/// full sinh would need to reach that value (asinh of the prediction).
inline double sinhlim(double xnew, double xold, double k) {
    const double ylim = std::sinh(k * xold) + k * std::cosh(k * xold) * (xnew - xold);
    return std::asinh(ylim) / k;
}

}  // namespace mrsim
