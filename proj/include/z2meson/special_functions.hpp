#pragma once

namespace z2meson {

/// Bessel function of the first kind of integer order, J_n(x).
/// Miller's downward recurrence normalized by J_0 + 2 sum_m J_2m = 1
/// (power series for |x| <= 1). Valid for |n| <= 200 and |x| <= 200;
/// throws std::invalid_argument outside that range.
double bessel_j(int n, double x);

/// Airy function of the first kind and its derivative. Maclaurin series in
/// extended precision for |x| <= 8, asymptotic expansions beyond.
double airy_ai(double x);
double airy_ai_prime(double x);

/// n-th zero of Ai (negative), 1 <= n <= 50, by safeguarded Newton iteration
/// from the standard asymptotic seed. Throws std::invalid_argument otherwise.
double airy_zero(int n);

}  // namespace z2meson
