#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/model_cache.hpp"
#include "z2meson/spinmap.hpp"
#include "z2meson/theory.hpp"

using namespace z2meson;
using testing_support::cached_model;
using testing_support::config_for;

namespace {

constexpr double kPi = std::numbers::pi;

MesonRun run_at(double h, double theta, AnalysisWindow window = {}, std::vector<double> snapshots = {}) {
  RunConfig c = config_for(100, 1.0, h, theta);
  c.window = window;
  c.snapshot_times = std::move(snapshots);
  return run_meson(cached_model(100, 1.0, h), c);
}

std::vector<double> mean_displacements(const OccupationGrid& grid, int up_to) {
  std::vector<int> sizes;
  for (int r = 1; r <= up_to; ++r) sizes.push_back(r);
  std::vector<double> d;
  for (const auto& p : size_filtering_profile(grid, sizes)) d.push_back(p.mean_displacement);
  return d;
}

}  // namespace

TEST_SUITE("physics") {
  TEST_CASE("headline mean size at h = 1.1") {
    const MesonRun run = run_at(1.1, 0.0, {20.0, 60.0, true});
    CHECK(std::abs(run.summary.r_prime_avg - 1.46) <= 0.05);
    CHECK(run.theta_energy == doctest::Approx(2.2).epsilon(1e-12));
  }

  TEST_CASE("conservation along the L = 100 trajectory") {
    const MesonRun run = run_at(1.1, 3 * kPi / 4);
    for (std::size_t i = 0; i < run.series.size(); ++i) {
      CHECK(std::abs(run.series.norm_error[i]) <= 1e-8);
      CHECK(std::abs(run.series.energy[i] - run.theta_energy) <= 1e-8);
    }
  }

  TEST_CASE("size filtering at h = 1.1, Jt = 50") {
    const MesonRun run = run_at(1.1, 0.0, {}, {50.0});
    const auto d = mean_displacements(run.series.occupation.front(), 3);
    REQUIRE(d.size() == 3);
    CHECK(d[0] > d[1]);
    CHECK(d[1] > d[2]);
  }

  TEST_CASE("size filtering at h = 0.3, Jt = 30") {
    const MesonRun run = run_at(0.3, 0.0, {}, {30.0});
    const auto d = mean_displacements(run.series.occupation.front(), 4);
    REQUIRE(d.size() == 4);
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i - 1] > d[i]);
  }

  TEST_CASE("the r = 1 meson outruns the theta = 3pi/4 meson") {
    CHECK(run_at(1.1, 0.0).summary.speed.v > run_at(1.1, 3 * kPi / 4).summary.speed.v);
  }

  TEST_CASE("speed falls as size grows at h = 0.3") {
    RunConfig c = config_for(100, 1.0, 0.3, 0.0);
    const std::vector<double> thetas{0.0, kPi / 8, 3 * kPi / 8, 3 * kPi / 4, kPi};
    const ThetaSweepReport rep = sweep_theta(cached_model(100, 1.0, 0.3), c, thetas);
    CHECK(rep.speed_nonincreasing_in_size);
    CHECK(rep.min_speed_r_squared >= 0.95);
  }

  TEST_CASE("theta = 0 sweep row matches a direct run") {
    const RunConfig c = config_for(100, 1.0, 1.1, 0.0);
    const std::vector<double> thetas{0.0};
    const ThetaSweepReport rep = sweep_theta(cached_model(100, 1.0, 1.1), c, thetas);
    const MesonRun direct = run_at(1.1, 0.0);
    CHECK(rep.rows[0].r_prime_avg == direct.summary.r_prime_avg);
    CHECK(rep.rows[0].v == direct.summary.speed.v);
  }

  TEST_CASE("strong field: long-time mean size") {
    const MesonRun run = run_at(5.0, 0.0);
    const double predicted = 1.0 + 3.0 / (4 * 25.0);
    CHECK(std::abs(run.summary.r_prime_avg - predicted) <= 0.1 * predicted);
  }

  TEST_CASE("strong field: breathing frequency 2h within 2%" * doctest::may_fail()) {
    const MesonRun run = run_at(5.0, 0.0);
    REQUIRE(run.summary.omega.detected);
    CHECK(std::abs(run.summary.omega.omega - 10.0) <= 0.02 * 10.0);
  }

  TEST_CASE("strong field: breathing frequency equals the r = 1 to r = 2 gap") {
    // second-order shifts at k = 0: r = 1 moves down by 2J^2/h, r = 2 is unshifted
    const MesonRun run = run_at(5.0, 0.0);
    REQUIRE(run.summary.omega.detected);
    const double gap = 2 * 5.0 + 2.0 / 5.0;
    CHECK(std::abs(run.summary.omega.omega - gap) <= 0.02 * gap);
  }

  TEST_CASE("snapshot marginals at h = 1.1, Jt = 20") {
    const SectorModel& model = cached_model(100, 1.0, 1.1);
    const std::vector<double> when{20.0};
    const WaveState psi = evolve_states(model.spectrum, initial_theta_state(model.basis, 0.0), when).front();
    const SnapshotDistribution d = sector_to_snapshot_distribution(psi);
    const auto direct = occupation_grid(psi).size_distribution();
    const auto marginal = d.size_marginal();
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) worst = std::max(worst, std::abs(direct[i] - marginal[i]));
    CHECK(worst <= 1e-10);
    CHECK(std::abs(d.mean_size() - measure(psi).r_avg) <= 1e-10);
  }

  TEST_CASE("Monte Carlo mean size at h = 1.1, Jt = 30") {
    const SectorModel& model = cached_model(100, 1.0, 1.1);
    const std::vector<double> when{30.0};
    const WaveState psi = evolve_states(model.spectrum, initial_theta_state(model.basis, 0.0), when).front();
    const SnapshotDistribution d = sector_to_snapshot_distribution(psi);
    const double exact = measure(psi).r_avg;
    for (std::uint64_t seed : {7u, 2024u}) {
      const SampleEstimate e = sample_snapshots(d, 100000, seed, 2);
      CHECK(std::abs(e.r_avg_hat - exact) < 3 * e.r_std / std::sqrt(1e5));
    }
  }
}
