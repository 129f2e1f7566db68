#pragma once

namespace ygraph {

/// Kernel of the linear group e^{-t d_x^3}:
///   A(x) = (1/2pi) \int e^{ix xi} e^{i xi^3} d xi = 3^{-1/3} Ai(3^{-1/3} x).
/// Absolute error below 1e-10 on |x| <= 30.
double airy_scaled(double x);

/// A'(x) = 3^{-2/3} Ai'(3^{-1/3} x).
double airy_scaled_deriv(double x);

/// A''(x) = (x/3) A(x), exact from the ODE.
double airy_scaled_deriv2(double x);

/// Standard Airy function and derivative.
double airy_ai(double z);
double airy_ai_prime(double z);

/// Gamma function; throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double z);

/// Both A and A' in one call (shares the series work).
struct AiryValue {
    double x;
    double a;
    double a_prime;
};
AiryValue airy_value(double x);

} // namespace ygraph
