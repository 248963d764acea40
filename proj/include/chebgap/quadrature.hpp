#pragma once

// Thin wrappers over Boost.Math quadrature used by the potential-theory code.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace chebgap::quad {

/// Adaptive 31-point Gauss-Kronrod; `rel_tol` is relative to the L1 norm.
/// Bisection stops at `max_depth` levels whether or not `rel_tol` was met.
template <class F>
double adaptive(F&& f, double a, double b, double rel_tol, double* error = nullptr,
                unsigned max_depth = 12) {
    if (a == b)
        return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, max_depth, rel_tol, &err, &l1);
    if (error)
        *error = err;
    return v;
}

/// Double-exponential rule for integrands with algebraic or logarithmic
/// endpoint singularities.  `f` may take (x) or (x, xc) where xc is the
/// signed distance to the nearer endpoint.
template <class F>
double endpoint_singular(F&& f, double a, double b, double rel_tol, double* error = nullptr) {
    if (a == b)
        return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double err = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    const double v = integrator.integrate(f, a, b, rel_tol, &err, &l1, &levels);
    if (error)
        *error = err;
    return v;
}

} // namespace chebgap::quad
