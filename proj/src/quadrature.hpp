#pragma once

#include <functional>

namespace pdhs::detail {

// int_a^b f(x) cos(xi x) dx by adaptive Gauss-Kronrod (15 points), to an
// absolute error of about tol * int |f|. The interval is pre-split so that
// no panel holds more than about half an oscillation; the panel error
// estimates are then trustworthy.
double cosine_integral(const std::function<double(double)>& f, double a,
                       double b, double xi, double tol = 1e-13);

// Same for an arbitrary integrand, absolute error about tol * int |f|.
double adaptive_integral(const std::function<double(double)>& f, double a,
                         double b, double tol = 1e-13);

}  // namespace pdhs::detail
