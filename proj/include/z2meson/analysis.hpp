#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "z2meson/dynamics.hpp"

namespace z2meson {

/// Time window [t_start, t_end] in units of 1/J. When `respect_reflection`
/// is set, samples at or after the series' reflection time are dropped.
struct AnalysisWindow {
  double t_start = 10.0;
  double t_end = 60.0;
  bool respect_reflection = true;
};

/// Indices of the samples inside the window. Throws std::invalid_argument
/// unless 0 <= t_start < t_end.
std::vector<std::size_t> window_indices(const ObservableSeries& series, const AnalysisWindow& window);

/// Arithmetic mean of r_avg over the window (needs >= 50 samples).
double long_time_average(const ObservableSeries& series, const AnalysisWindow& window);

struct FrequencyOptions {
  int padding = 8;
  std::size_t min_samples = 128;
  double min_prominence = 3.0;
  /// Low-frequency bins excluded from the peak search, counted in units of
  /// the unpadded frequency resolution 2 pi / (N dt).
  int excluded_bins = 3;
};

struct FrequencyEstimate {
  double omega = 0.0;           ///< angular frequency, units of J
  double peak_magnitude = 0.0;
  double median_magnitude = 0.0;
  double prominence = 0.0;      ///< peak / median
  std::size_t samples = 0;
  bool detected = false;        ///< false: "no oscillation detected"
};

/// Dominant angular frequency of a uniformly sampled signal: mean removed,
/// Hann window, zero padding, parabolic refinement around the peak bin.
/// Throws std::invalid_argument for too few samples or a non-uniform grid.
FrequencyEstimate dominant_frequency(std::span<const double> times, std::span<const double> values,
                                     const FrequencyOptions& options = {});
FrequencyEstimate dominant_frequency(const ObservableSeries& series, const AnalysisWindow& window,
                                     const FrequencyOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct OriginFit {
  double slope = 0.0;
  double r_squared = 0.0;           ///< 1 - SS_res / sum y^2 (no-intercept model)
  double r_squared_centered = 0.0;  ///< 1 - SS_res / sum (y - mean)^2
};

/// Least squares y = slope x through the origin.
OriginFit fit_through_origin(std::span<const double> x, std::span<const double> y);

struct SpeedFit {
  double v = 0.0;  ///< d c_s / d(Jt), sites per 1/J
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
  bool low_confidence = false;  ///< r_squared < 0.95
};

SpeedFit fit_speed(const ObservableSeries& series, const AnalysisWindow& window);

struct SizeDisplacement {
  int r = 0;
  double probability = 0.0;
  double mean_displacement = 0.0;  ///< <|c - c_center|> given r
};

/// Sizes with total probability below 1e-6 are omitted.
std::vector<SizeDisplacement> size_filtering_profile(const OccupationGrid& grid, std::span<const int> r_values);

/// Distance from the chain center to the outermost site whose density
/// exceeds `threshold`; 0 if none does.
double light_cone_front(std::span<const double> density, double threshold = 1e-2);

struct MesonSummary {
  double r_prime_avg = 0.0;
  FrequencyEstimate omega;
  SpeedFit speed;
  double window_start = 0.0;  ///< effective first sample time
  double window_end = 0.0;    ///< effective last sample time
  std::size_t samples = 0;
  double front = 0.0;         ///< light-cone front at the last sample
};

/// long_time_average, dominant_frequency and fit_speed over one window.
/// The frequency is left undetected when the window is too short for it.
MesonSummary summarize(const ObservableSeries& series, const AnalysisWindow& window);

}  // namespace z2meson
