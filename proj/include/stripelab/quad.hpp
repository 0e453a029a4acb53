#pragma once

// Adaptive quadrature helpers for the continuum constants.

#include <functional>

#include "stripelab/params.hpp"

namespace stripelab {

// Adaptive Simpson on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

// I(s) = integral_0^inf alpha^s (1 - tanh(alpha)) d(alpha), s > -1.
// Quadrature on [0, cutoff] plus a certified exponential tail bound.
Certified tanh_tail_integral(double s, double tol = kDefaultTol);

}  // namespace stripelab
