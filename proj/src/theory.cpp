#include "z2meson/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "z2meson/special_functions.hpp"

namespace z2meson::theory {

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::LargeField: return "large-h";
    case Regime::SmallField: return "small-h";
    case Regime::Exact: return "exact";
  }
  return "unknown";
}

double quantized_energy_large_h(int n, double h) {
  if (n < 1) throw std::invalid_argument("quantized_energy_large_h: n must be >= 1");
  return 2.0 * h * n;
}

namespace {

// cos(k/2), exactly zero at the zone edge k = +-pi where std::cos leaves ~6e-17.
double half_cos(double k) {
  const double half = 0.5 * k;
  return std::abs(std::abs(half) - std::numbers::pi / 2) < 1e-15 ? 0.0 : std::cos(half);
}

}  // namespace

double airy_energy(int n, double k, double h, double J) {
  if (n < 1) throw std::invalid_argument("airy_energy: n must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("airy_energy: h must be positive");
  const double c = half_cos(k);
  if (!(c > 0.0)) throw std::invalid_argument("airy_energy: cos(k/2) must be positive");
  return -2.0 * airy_zero(n) * std::cbrt(J * h * h * c);
}

double theta_energy(double theta, double h, double J) {
  const double s = std::sin(0.5 * theta);
  return J * std::sin(theta) + 2.0 * h * s * s + 2.0 * h;
}

double breathing_amplitude(double t, double h, double J) {
  if (!(h > 0.0)) throw std::invalid_argument("breathing_amplitude: h must be positive");
  return std::numbers::sqrt2 * (J / h) * std::abs(std::sin(h * t));
}

double ravg_large_h(double t, double h, double J) {
  if (!(h > 0.0)) throw std::invalid_argument("ravg_large_h: h must be positive");
  const double a = J * J / (2.0 * h * h);
  const double s = std::sin(h * t);
  return 1.0 + a + a * s * s;
}

namespace {
void check_hopping_args(int n, double h, double J) {
  if (n < 1 || n > 150) throw std::invalid_argument("hopping_matrix_element: need 1 <= n <= 150");
  if (!(h > 0.0) || !(J > 0.0)) throw std::invalid_argument("hopping_matrix_element: need h > 0 and J > 0");
}
}  // namespace

double hopping_log_magnitude(int n, double h, double J) {
  check_hopping_args(n, h, J);
  return std::log(J) + (2.0 * n - 1.0) * std::log(J / (2.0 * h)) + std::log(static_cast<double>(n)) -
         2.0 * std::lgamma(n + 1.0);
}

double hopping_matrix_element(int n, double h, double J) { return std::exp(hopping_log_magnitude(n, h, J)); }

double hopping_log_magnitude_stirling(int n, double h, double J) {
  check_hopping_args(n, h, J);
  const double x = static_cast<double>(n);
  const double log_factorial = 0.5 * std::log(2.0 * std::numbers::pi * x) + x * (std::log(x) - 1.0);
  return std::log(J) + (2.0 * x - 1.0) * std::log(J / (2.0 * h)) + std::log(x) - 2.0 * log_factorial;
}

PeakLength peak_meson_length(double h, double J) {
  if (!(h > 0.0) || !(J > 0.0)) throw std::invalid_argument("peak_meson_length: need h > 0 and J > 0");
  PeakLength out;
  out.estimate = J / (h * std::numbers::e);
  double best = hopping_log_magnitude(1, h, J);
  for (int n = 2; n <= 150; ++n) {
    const double v = hopping_log_magnitude(n, h, J);
    if (v > best) {
      best = v;
      out.argmax = n;
    }
  }
  return out;
}

std::vector<double> bessel_limit_eigenvector(int n, double k, double h, double J, int r_max) {
  if (!(h > 0.0)) throw std::invalid_argument("bessel_limit_eigenvector: h must be positive");
  if (n < 1 || r_max < 1) throw std::invalid_argument("bessel_limit_eigenvector: need n >= 1 and r_max >= 1");
  const double c = half_cos(k);
  const double arg = 2.0 * J * c / h;
  std::vector<double> out(static_cast<std::size_t>(r_max));
  double norm = 0.0;
  for (int r = 1; r <= r_max; ++r) {
    const int order = r - n;
    double v = 0.0;
    if (std::abs(order) <= 200) {
      v = bessel_j(order, arg);
    } else if (std::abs(arg) > 0.5 * std::abs(order)) {
      throw std::invalid_argument("bessel_limit_eigenvector: Bessel order out of range for this argument");
    }
    out[r - 1] = v;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& v : out) v /= norm;
  return out;
}

}  // namespace z2meson::theory
