#include "z2meson/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace z2meson {

std::vector<std::size_t> window_indices(const ObservableSeries& series, const AnalysisWindow& window) {
  if (!(window.t_start >= 0.0 && window.t_start < window.t_end)) {
    throw std::invalid_argument("AnalysisWindow: need 0 <= t_start < t_end");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    if (t < window.t_start - 1e-12 || t > window.t_end + 1e-12) continue;
    if (window.respect_reflection && series.reflected(i)) continue;
    out.push_back(i);
  }
  return out;
}

double long_time_average(const ObservableSeries& series, const AnalysisWindow& window) {
  const auto idx = window_indices(series, window);
  if (idx.size() < 50) {
    throw std::invalid_argument("long_time_average: window holds " + std::to_string(idx.size()) +
                                " samples, need at least 50");
  }
  double s = 0.0;
  for (auto i : idx) s += series.r_avg[i];
  return s / static_cast<double>(idx.size());
}

FrequencyEstimate dominant_frequency(std::span<const double> times, std::span<const double> values,
                                     const FrequencyOptions& options) {
  const std::size_t n = values.size();
  if (times.size() != n) throw std::invalid_argument("dominant_frequency: size mismatch");
  if (n < options.min_samples || n < 3) {
    throw std::invalid_argument("dominant_frequency: " + std::to_string(n) + " samples, need at least " +
                                std::to_string(options.min_samples));
  }
  if (options.padding < 1) throw std::invalid_argument("dominant_frequency: padding must be >= 1");
  const double dt = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * std::max(1.0, dt)) {
      throw std::invalid_argument("dominant_frequency: time grid is not uniform");
    }
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1)));
    y[i] = (values[i] - mean) * hann;
  }

  // Direct DFT of the zero-padded signal; only the first n samples are nonzero.
  const std::size_t padded = n * static_cast<std::size_t>(options.padding);
  const std::size_t half = padded / 2;
  std::vector<double> magnitude(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double step = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(padded);
    // Rotate by a unit phasor instead of calling sin/cos per sample.
    const double cr = std::cos(step), ci = std::sin(step);
    double pr = 1.0, pi = 0.0, re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      re += y[i] * pr;
      im += y[i] * pi;
      const double nr = pr * cr - pi * ci;
      pi = pr * ci + pi * cr;
      pr = nr;
    }
    magnitude[k] = std::hypot(re, im);
  }

  const std::size_t first = static_cast<std::size_t>(options.excluded_bins) * static_cast<std::size_t>(options.padding);
  FrequencyEstimate est;
  est.samples = n;
  if (first >= half) return est;
  std::size_t peak = first;
  for (std::size_t k = first; k <= half; ++k) {
    if (magnitude[k] > magnitude[peak]) peak = k;
  }
  double offset = 0.0;
  if (peak > first && peak < half) {
    const double a = magnitude[peak - 1], b = magnitude[peak], c = magnitude[peak + 1];
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  std::vector<double> rest(magnitude.begin() + static_cast<std::ptrdiff_t>(first), magnitude.end());
  std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(rest.size() / 2), rest.end());
  est.median_magnitude = rest[rest.size() / 2];
  est.peak_magnitude = magnitude[peak];
  est.prominence = est.median_magnitude > 0.0 ? est.peak_magnitude / est.median_magnitude : 0.0;
  est.omega = 2.0 * std::numbers::pi * (static_cast<double>(peak) + offset) / (static_cast<double>(padded) * dt);
  est.detected = est.peak_magnitude > 0.0 && est.prominence >= options.min_prominence;
  return est;
}

FrequencyEstimate dominant_frequency(const ObservableSeries& series, const AnalysisWindow& window,
                                     const FrequencyOptions& options) {
  const auto idx = window_indices(series, window);
  std::vector<double> t, y;
  t.reserve(idx.size());
  y.reserve(idx.size());
  for (auto i : idx) {
    t.push_back(series.times[i]);
    y.push_back(series.r_avg[i]);
  }
  return dominant_frequency(t, y, options);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 2) throw std::invalid_argument("fit_line: need at least two paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LinearFit fit;
  fit.samples = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 1) throw std::invalid_argument("fit_through_origin: need paired samples");
  double sxx = 0.0, sxy = 0.0, syy = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
    my += y[i];
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_through_origin: x values are all zero");
  my /= static_cast<double>(n);
  OriginFit fit;
  fit.slope = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.slope * x[i];
    ss_res += r * r;
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.r_squared_centered = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SpeedFit fit_speed(const ObservableSeries& series, const AnalysisWindow& window) {
  const auto idx = window_indices(series, window);
  std::vector<double> t, c;
  for (auto i : idx) {
    t.push_back(series.times[i]);
    c.push_back(series.c_s[i]);
  }
  const LinearFit line = fit_line(t, c);
  SpeedFit fit;
  fit.v = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.samples = line.samples;
  fit.low_confidence = line.r_squared < 0.95;
  return fit;
}

std::vector<SizeDisplacement> size_filtering_profile(const OccupationGrid& grid, std::span<const int> r_values) {
  const int L = grid.sites();
  const double center = 0.5 * (L + 1);
  std::vector<SizeDisplacement> out;
  for (int r : r_values) {
    if (r < 1 || r > L - 1) continue;
    double p = 0.0, weighted = 0.0;
    for (int cc = r + 2; cc <= 2 * L - r; cc += 2) {
      const double q = grid.at(r, cc);
      p += q;
      weighted += q * std::abs(0.5 * cc - center);
    }
    if (p < 1e-6) continue;
    out.push_back({r, p, weighted / p});
  }
  return out;
}

double light_cone_front(std::span<const double> density, double threshold) {
  const double center = 0.5 * (static_cast<double>(density.size()) + 1.0);
  double front = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    if (density[i] > threshold) front = std::max(front, std::abs(static_cast<double>(i + 1) - center));
  }
  return front;
}

MesonSummary summarize(const ObservableSeries& series, const AnalysisWindow& window) {
  MesonSummary out;
  const auto idx = window_indices(series, window);
  out.samples = idx.size();
  if (!idx.empty()) {
    out.window_start = series.times[idx.front()];
    out.window_end = series.times[idx.back()];
    out.front = light_cone_front(series.density[idx.back()]);
  }
  out.r_prime_avg = long_time_average(series, window);
  out.speed = fit_speed(series, window);
  const FrequencyOptions freq;
  if (idx.size() >= freq.min_samples) out.omega = dominant_frequency(series, window, freq);
  out.omega.samples = idx.size();
  return out;
}

}  // namespace z2meson
