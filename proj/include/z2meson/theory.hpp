#pragma once

#include <string>
#include <vector>

namespace z2meson::theory {

enum class Regime { LargeField, SmallField, Exact };

const char* regime_name(Regime regime);

/// A closed-form reference value and the regime it is meant for.
struct LimitPrediction {
  std::string quantity;
  double value = 0.0;
  Regime regime = Regime::Exact;
};

/// Wannier-Stark level 2 h n (n >= 1).
double quantized_energy_large_h(int n, double h);

/// -2 z_n (J h^2 cos(k/2))^{1/3}: continuum level measured from the bottom of
/// the relative-coordinate band, -4 J cos(k/2). Throws std::invalid_argument
/// for n < 1, h <= 0 or cos(k/2) <= 0.
double airy_energy(int n, double k, double h, double J);

/// <psi_theta|H|psi_theta> = J sin(theta) + 2h sin^2(theta/2) + 2h.
double theta_energy(double theta, double h, double J);

/// Breathing width sqrt(2) (J/h) |sin(h t)| of the relative coordinate.
double breathing_amplitude(double t, double h, double J);

/// Large-field mean size after starting from r = 1:
/// 1 + J^2/(2h^2) + J^2 sin^2(h t)/(2h^2).
double ravg_large_h(double t, double h, double J);

/// |H_2n| = J (J/2h)^{2n-1} n / (n!)^2, the leading amplitude for a length-n
/// meson to move by n sites. Valid for 1 <= n <= 150.
double hopping_matrix_element(int n, double h, double J);
/// log|H_2n|, finite for all admissible n.
double hopping_log_magnitude(int n, double h, double J);
/// log|H_2n| with n! replaced by Stirling's sqrt(2 pi n) (n/e)^n.
double hopping_log_magnitude_stirling(int n, double h, double J);

struct PeakLength {
  double estimate = 0.0;  ///< J / (h e)
  int argmax = 1;         ///< integer argmax of |H_2n| over 1 <= n <= 150
};

PeakLength peak_meson_length(double h, double J);

/// gamma_r = J_{r-n}(2 J cos(k/2) / h) for r = 1..r_max, normalized.
std::vector<double> bessel_limit_eigenvector(int n, double k, double h, double J, int r_max);

}  // namespace z2meson::theory
