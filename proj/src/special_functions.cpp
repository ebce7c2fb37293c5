#include "z2meson/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace z2meson {
namespace {

double bessel_series(int m, double x) {
  // sum_j (-1)^j (x/2)^{2j+m} / (j! (j+m)!), |x| <= 1
  const double half = 0.5 * x;
  double term = (m == 0) ? 1.0 : std::exp(m * std::log(std::abs(half)) - std::lgamma(m + 1.0));
  if (half < 0.0 && (m % 2)) term = -term;
  double sum = term;
  const double q = -half * half;
  for (int j = 1; j < 60; ++j) {
    term *= q / (static_cast<double>(j) * (j + m));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_miller(int m, double x) {
  // x > 1 here.
  const double top = std::max(static_cast<double>(m), x);
  int start = static_cast<int>(top) + 30 + static_cast<int>(std::sqrt(60.0 * top));
  start += start % 2;
  double next = 0.0;  // J_{k+1}
  double cur = 1e-30; // J_k
  double norm = 0.0;
  double wanted = 0.0;
  constexpr double big = 1e250;
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / x) * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > big) {
      cur /= big;
      next /= big;
      norm /= big;
      wanted /= big;
    }
    const int order = k - 1;
    if (order == m) wanted = cur;
    if (order > 0 && order % 2 == 0) norm += 2.0 * cur;
  }
  norm += cur;  // J_0
  return wanted / norm;
}

// Asymptotic coefficients u_k, v_k (DLMF 9.7.2).
struct AiryCoefficients {
  static constexpr int count = 40;
  double u[count];
  double v[count];
  constexpr AiryCoefficients() : u{}, v{} {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < count; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
      v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
    }
  }
};
constexpr AiryCoefficients kAiry;

constexpr long double kAi0 = 0.355028053887817239260L;
constexpr long double kAiPrime0 = -0.258819403792806798405L;
constexpr double kSeriesLimit = 8.0;

// Maclaurin series Ai = c1 f - c2 g, in long double to absorb cancellation.
void airy_series(double xd, double* ai, double* aip) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double f = 1.0L, g = x, fp = 0.0L, gp = 1.0L;
  long double tf = 1.0L, tg = x;    // terms of f and g
  long double tfp = 0.5L * x * x;   // first term of f'
  long double tgp = 1.0L;           // first term of g'
  fp = tfp;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    if (k >= 2) tfp *= x3 / ((3.0L * k - 1.0L) * (3.0L * (k - 1)));
    tgp *= x3 / ((3.0L * k - 2.0L) * (3.0L * k));
    f += tf;
    g += tg;
    if (k >= 2) fp += tfp;
    gp += tgp;
    const long double scale = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
    if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-22L * scale && k > 3) break;
  }
  const long double c1 = kAi0;
  const long double c2 = -kAiPrime0;
  *ai = static_cast<double>(c1 * f - c2 * g);
  *aip = static_cast<double>(c1 * fp - c2 * gp);
}

// Truncated alternating asymptotic sum; stops at the smallest term.
double asymptotic_sum(const double* c, double inv, int parity, bool alternate) {
  double sum = 0.0;
  double power = (parity == 0) ? 1.0 : inv;
  double last = INFINITY;
  for (int k = parity, sign = 1; k < AiryCoefficients::count; k += (alternate ? 2 : 1)) {
    const double term = c[k] * power;
    if (std::abs(term) > last) break;
    last = std::abs(term);
    sum += sign * term;
    power *= alternate ? inv * inv : inv;
    sign = -sign;
    if (last < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

void airy_positive(double x, double* ai, double* aip) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double inv = 1.0 / zeta;
  const double e = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  const double q = std::pow(x, 0.25);
  *ai = e / q * asymptotic_sum(kAiry.u, inv, 0, false);
  *aip = -e * q * asymptotic_sum(kAiry.v, inv, 0, false);
}

void airy_negative(double x, double* ai, double* aip) {
  const double y = -x;
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  const double inv = 1.0 / zeta;
  const double phase = zeta + 0.25 * std::numbers::pi;
  const double s = std::sin(phase), c = std::cos(phase);
  const double q = std::pow(y, 0.25);
  const double rsp = 1.0 / std::sqrt(std::numbers::pi);
  const double pu = asymptotic_sum(kAiry.u, inv, 0, true);
  const double qu = asymptotic_sum(kAiry.u, inv, 1, true);
  const double pv = asymptotic_sum(kAiry.v, inv, 0, true);
  const double qv = asymptotic_sum(kAiry.v, inv, 1, true);
  *ai = rsp / q * (s * pu - c * qu);
  *aip = -rsp * q * (c * pv + s * qv);
}

void airy_both(double x, double* ai, double* aip) {
  if (std::abs(x) <= kSeriesLimit) {
    airy_series(x, ai, aip);
  } else if (x > 0.0) {
    airy_positive(x, ai, aip);
  } else {
    airy_negative(x, ai, aip);
  }
}

}  // namespace

double bessel_j(int n, double x) {
  if (std::abs(n) > 200 || !(std::abs(x) <= 200.0)) {
    throw std::invalid_argument("bessel_j: need |n| <= 200 and |x| <= 200, got n=" + std::to_string(n) +
                                " x=" + std::to_string(x));
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const int m = std::abs(n);
  double sign = (n < 0 && (m % 2)) ? -1.0 : 1.0;
  if (x < 0.0) {
    x = -x;
    if (m % 2) sign = -sign;
  }
  return sign * (x <= 1.0 ? bessel_series(m, x) : bessel_miller(m, x));
}

double airy_ai(double x) {
  double ai, aip;
  airy_both(x, &ai, &aip);
  return ai;
}

double airy_ai_prime(double x) {
  double ai, aip;
  airy_both(x, &ai, &aip);
  return aip;
}

double airy_zero(int n) {
  if (n < 1 || n > 50) throw std::invalid_argument("airy_zero: need 1 <= n <= 50, got " + std::to_string(n));
  // DLMF 9.9.6: a_n = -T(3 pi (4n - 1) / 8), T(t) ~ t^{2/3}(1 + 5/48 t^-2 - ...)
  const double t = 3.0 * std::numbers::pi * (4.0 * n - 1.0) / 8.0;
  const double t2 = 1.0 / (t * t);
  double z = -std::pow(t, 2.0 / 3.0) *
             (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0 - t2 * 108056875.0 / 6967296.0))));
  // Neighbouring zeros are at least ~0.3 apart for n <= 50; keep Newton
  // steps inside that trust region.
  const double max_step = 0.1;
  for (int iter = 0; iter < 100; ++iter) {
    double ai, aip;
    airy_both(z, &ai, &aip);
    double step = ai / aip;
    step = std::clamp(step, -max_step, max_step);
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace z2meson
