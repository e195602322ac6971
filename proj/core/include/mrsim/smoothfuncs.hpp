#pragma once

#include <cmath>
#include <limits>

namespace mrsim {

/// Knobs shared by the smoothed / slope-capped primitives below.
struct SmoothParams {
    double smoothing = 1e-8;  ///< width^2 of the smoothing region around kinks
    double maxslope = 1e15;   ///< slope cap for the exponential family
};

/// Value together with its derivative with respect to the primary input.
struct ValDer {
    double value = 0.0;
    double derivative = 0.0;
};

/// Smooth version of the unit step, 0.5*(x/sqrt(x^2+sigma)+1).
/// Monotone, maps R onto (0,1), passes through 1/2 at x=0.
inline ValDer smoothstep(double x, double smoothing) {
    const double h = std::hypot(x, std::sqrt(smoothing));
    // 0.5*(x/h+1) rounds to zero for large negative x; the algebraically
    // equal form below keeps the value strictly positive.
    const double v = x >= 0.0 ? 0.5 * (x / h + 1.0) : 0.5 * smoothing / (h * (h - x));
    return {v, 0.5 * smoothing / (h * h * h)};
}

/// Smooth version of max(x, 0), 0.5*(x+sqrt(x^2+sigma)).
/// Strictly positive for all finite x; equals sigma^0.5/2 at x=0.
inline ValDer smoothclip(double x, double smoothing) {
    const double h = std::hypot(x, std::sqrt(smoothing));
    // 0.5*(x+h) cancels catastrophically for large negative x; the
    // algebraically equal form 0.5*sigma/(h-x) stays accurate there.
    const double v = x > 0.0 ? 0.5 * (x + h) : 0.5 * smoothing / (h - x);
    return {v, v / h};
}

/// Result of smoothswitch with partials against all three inputs.
struct SwitchDer {
    double value = 0.0;
    double d_fn = 0.0;
    double d_fp = 0.0;
    double d_x = 0.0;
};

/// Smooth selector: fn for x<<0, fp for x>>0, blended over the smoothing width.
inline SwitchDer smoothswitch(double fn, double fp, double x, double smoothing) {
    const ValDer w = smoothstep(x, smoothing);
    return {fn + (fp - fn) * w.value, 1.0 - w.value, w.value, (fp - fn) * w.derivative};
}

/// exp(x) capped to slope maxslope: linear continuation above ln(maxslope),
/// C1 at the junction. Saturates at DBL_MAX instead of overflowing.
inline ValDer safeexp(double x, double maxslope) {
    const double lnm = std::log(maxslope);
    if (x <= lnm) {
        const double e = std::exp(x);
        return {e, e};
    }
    double v = maxslope * (1.0 + x - lnm);
    if (!(v <= std::numeric_limits<double>::max())) {
        v = std::numeric_limits<double>::max();
    }
    return {v, maxslope};
}

/// sinh(x) built from two slope-capped exponentials; odd in x.
inline ValDer safesinh(double x, double maxslope) {
    const ValDer ep = safeexp(x, maxslope);
    const ValDer en = safeexp(-x, maxslope);
    return {0.5 * (ep.value - en.value), 0.5 * (ep.derivative + en.derivative)};
}

/// log of the smooth-clipped argument; finite for every finite x.
inline ValDer safelog(double x, double smoothing) {
    const ValDer c = smoothclip(x, smoothing);
    return {std::log(c.value), c.derivative / c.value};
}

/// a^b through safeexp(b*safelog(a)); derivative is with respect to a.
inline ValDer safepow(double a, double b, const SmoothParams& sp) {
    const ValDer l = safelog(a, sp.smoothing);
    const ValDer e = safeexp(b * l.value, sp.maxslope);
    return {e.value, e.derivative * b * l.derivative};
}

/// Scalar carrying two partial derivatives; the devices differentiate
/// against their branch voltage (slot 0) and internal unknown (slot 1).
struct Dual2 {
    double v = 0.0;
    double d0 = 0.0;
    double d1 = 0.0;
};

[[nodiscard]] inline Dual2 dual_var0(double v) { return {v, 1.0, 0.0}; }
[[nodiscard]] inline Dual2 dual_var1(double v) { return {v, 0.0, 1.0}; }
[[nodiscard]] inline Dual2 dual_const(double v) { return {v, 0.0, 0.0}; }

inline Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d0 + b.d0, a.d1 + b.d1}; }
inline Dual2 operator-(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.d0 - b.d0, a.d1 - b.d1}; }
inline Dual2 operator-(const Dual2& a) { return {-a.v, -a.d0, -a.d1}; }
inline Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v, a.d0 * b.v + a.v * b.d0, a.d1 * b.v + a.v * b.d1};
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) {
    const double inv = 1.0 / b.v;
    const double q = a.v * inv;
    return {q, (a.d0 - q * b.d0) * inv, (a.d1 - q * b.d1) * inv};
}
inline Dual2 operator+(const Dual2& a, double c) { return {a.v + c, a.d0, a.d1}; }
inline Dual2 operator+(double c, const Dual2& a) { return a + c; }
inline Dual2 operator-(const Dual2& a, double c) { return {a.v - c, a.d0, a.d1}; }
inline Dual2 operator-(double c, const Dual2& a) { return {c - a.v, -a.d0, -a.d1}; }
inline Dual2 operator*(const Dual2& a, double c) { return {a.v * c, a.d0 * c, a.d1 * c}; }
inline Dual2 operator*(double c, const Dual2& a) { return a * c; }
inline Dual2 operator/(const Dual2& a, double c) { return a * (1.0 / c); }
inline Dual2 operator/(double c, const Dual2& a) { return dual_const(c) / a; }

/// Chain a ValDer-producing scalar function through a Dual2 argument.
inline Dual2 chain(const ValDer& f, const Dual2& x) {
    return {f.value, f.derivative * x.d0, f.derivative * x.d1};
}

inline Dual2 smoothstep(const Dual2& x, double smoothing) { return chain(smoothstep(x.v, smoothing), x); }
inline Dual2 smoothclip(const Dual2& x, double smoothing) { return chain(smoothclip(x.v, smoothing), x); }
inline Dual2 safeexp(const Dual2& x, double maxslope) { return chain(safeexp(x.v, maxslope), x); }
inline Dual2 safesinh(const Dual2& x, double maxslope) { return chain(safesinh(x.v, maxslope), x); }
inline Dual2 safelog(const Dual2& x, double smoothing) { return chain(safelog(x.v, smoothing), x); }
inline Dual2 safepow(const Dual2& a, double b, const SmoothParams& sp) { return chain(safepow(a.v, b, sp), a); }

inline Dual2 smoothswitch(const Dual2& fn, const Dual2& fp, const Dual2& x, double smoothing) {
    const SwitchDer s = smoothswitch(fn.v, fp.v, x.v, smoothing);
    return {s.value,
            s.d_fn * fn.d0 + s.d_fp * fp.d0 + s.d_x * x.d0,
            s.d_fn * fn.d1 + s.d_fp * fp.d1 + s.d_x * x.d1};
}

inline Dual2 tanh(const Dual2& x) {
    const double t = std::tanh(x.v);
    return chain({t, 1.0 - t * t}, x);
}

/// Uncapped sinh; deliberately prone to explosive Newton behaviour.
inline Dual2 sinh_raw(const Dual2& x) {
    return chain({std::sinh(x.v), std::cosh(x.v)}, x);
}

}  // namespace mrsim
