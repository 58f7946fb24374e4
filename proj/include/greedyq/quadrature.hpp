#pragma once

#include <cmath>
#include <utility>

namespace greedyq {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [a,b].
// Returns the K15 value; *err receives the usual scaled |K15-G7| estimate.
template <class F>
double gk15(F&& f, double a, double b, double* err) {
    static const double node[8] = {
        0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
        0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
        0.949107912342758525, 0.991455371120812639};
    static const double wk[8] = {
        0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
        0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
        0.063092092629978553, 0.022935322010529225};
    static const double wg[4] = {
        0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
        0.129484966168869693};

    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(mid);
    double k15 = wk[0] * fc;
    double g7 = wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        double dx = h * node[i];
        double s = f(mid - dx) + f(mid + dx);
        k15 += wk[i] * s;
        if (i % 2 == 0) g7 += wg[i / 2] * s;
    }
    k15 *= h;
    g7 *= h;
    // Plain |K15-G7| is a deliberately conservative estimate; the callers
    // are oracles where extra subdivision is cheaper than a missed error.
    *err = std::fabs(k15 - g7);
    return k15;
}

namespace detail {

// Accepts an interval when its two halves reproduce the whole-interval
// value. The embedded |K15-G7| estimate alone can be fooled at integrand
// kinks, where both rules err by the same amount.
template <class F>
double adapt(F& f, double a, double b, double whole, double tol, int depth) {
    double e1, e2;
    double mid = 0.5 * (a + b);
    double left = gk15(f, a, mid, &e1);
    double right = gk15(f, mid, b, &e2);
    if (std::fabs(left + right - whole) <= tol || depth <= 0 ||
        b - a < 1e-14 * (1.0 + std::fabs(a)))
        return left + right;
    return adapt(f, a, mid, left, 0.5 * tol, depth - 1) +
           adapt(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive bisection to an absolute tolerance. Finite bounds only; callers
// clip infinite tails and account for the remainder themselves.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                          int max_depth = 48) {
    if (!(a < b)) return 0.0;
    double err;
    double whole = gk15(f, a, b, &err);
    return detail::adapt(f, a, b, whole, abs_tol, max_depth);
}

}  // namespace greedyq
