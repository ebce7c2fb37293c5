#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "z2meson/errors.hpp"
#include "z2meson/run_config.hpp"
#include "z2meson/runner.hpp"

namespace {

using z2meson::RunConfig;

// Flags shared by every subcommand; stored as text and applied over the
// config file so the file < command line precedence is explicit.
struct CommonFlags {
  std::string config_path;
  std::optional<std::string> L, h, J, theta, tmax, dt, window, seed, out_dir, format, snapshots, r_max, k, jobs;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    add(app, "--L", L, "L", "chain length (even)");
    add(app, "--h", h, "h", "string tension h in units of J");
    add(app, "--J", J, "J", "hopping J");
    add(app, "--theta", theta, "theta", "initial-state angle, e.g. 0, pi/8, 3pi/4");
    add(app, "--tmax", tmax, "t_max", "final time Jt");
    add(app, "--dt", dt, "dt", "time step");
    add(app, "--window", window, "window", "analysis window start:end in Jt");
    add(app, "--seed", seed, "seed", "sampling seed");
    add(app, "--out-dir", out_dir, "out_dir", "output directory");
    add(app, "--format", format, "format", "csv or json");
    add(app, "--snapshots", snapshots, "snapshots", "comma list of Jt for occupation grids");
    add(app, "--r-max", r_max, "r_max", "momentum-block truncation");
    add(app, "--k", k, "k", "center-of-mass momentum");
    add(app, "--jobs", jobs, "jobs", "worker threads");
  }

  void add(CLI::App* app, const std::string& flag, std::optional<std::string>& slot, const std::string& key,
           const std::string& help) {
    app->add_option(flag, slot, help);
    keys.emplace_back(key, &slot);
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) z2meson::load_config_file(c, config_path);
    for (const auto& [key, slot] : keys)
      if (*slot) z2meson::apply_setting(c, key, **slot);
    return c;
  }

  std::vector<std::pair<std::string, const std::optional<std::string>*>> keys;
};

void report(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meson dynamics in the two-particle sector of a Z2 lattice gauge theory"};
  app.set_version_flag("--version", std::string(z2meson::kVersion));
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  CommonFlags evolve_f, field_f, theta_f, theory_f, sample_f, spectrum_f;

  auto* evolve = app.add_subcommand("evolve", "evolve one initial state and summarize it");
  evolve_f.attach(evolve);

  auto* sweep_field = app.add_subcommand("sweep-field", "summary table over a list of field values");
  field_f.attach(sweep_field);
  std::string h_list = "1.1,1.5,2,3,4";
  sweep_field->add_option("--h-list", h_list, "comma list of h values")->capture_default_str();

  auto* sweep_theta = app.add_subcommand("sweep-theta", "summary table over a list of initial-state angles");
  theta_f.attach(sweep_theta);
  std::string theta_list = "0,pi/8,3pi/8,3pi/4,pi";
  sweep_theta->add_option("--theta-list", theta_list, "comma list of theta values")->capture_default_str();

  auto* theory = app.add_subcommand("theory", "tabulate closed-form limits");
  theory_f.attach(theory);
  z2meson::TheoryRequest treq;
  std::string theory_values;
  theory->add_option("--quantity", treq.quantity, "quantity to tabulate")->required();
  theory->add_option("--n-max", treq.n_max, "largest level or meson length")->capture_default_str();
  theory->add_option("--values", theory_values, "comma list of theta or h values");

  auto* spin = app.add_subcommand("spin-sample", "sample spin snapshots of the evolved state");
  sample_f.attach(spin);
  z2meson::SampleRequest sreq;
  spin->add_option("--count", sreq.count, "number of snapshots")->capture_default_str();
  spin->add_option("--time", sreq.time, "measurement time Jt")->capture_default_str();
  spin->add_option("--trotter-dt", sreq.trotter_dt, "also run the Trotterized spin model with this step");

  auto* spectrum = app.add_subcommand("spectrum", "momentum-block and sector spectra");
  spectrum_f.attach(spectrum);
  bool sector = false, dump = false;
  spectrum->add_flag("--sector", sector, "also diagonalize the full open-chain sector");
  spectrum->add_flag("--dump-operator", dump, "write the sector Hamiltonian as triplets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*evolve) report(z2meson::cmd_evolve(evolve_f.resolve()));
    else if (*sweep_field)
      report(z2meson::cmd_sweep_field(field_f.resolve(), z2meson::parse_number_list(h_list)));
    else if (*sweep_theta)
      report(z2meson::cmd_sweep_theta(theta_f.resolve(), z2meson::parse_number_list(theta_list)));
    else if (*theory) {
      treq.values = z2meson::parse_number_list(theory_values);
      report(z2meson::cmd_theory(theory_f.resolve(), treq));
    } else if (*spin) report(z2meson::cmd_spin_sample(sample_f.resolve(), sreq));
    else if (*spectrum) report(z2meson::cmd_spectrum(spectrum_f.resolve(), sector, dump));
  } catch (const z2meson::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const z2meson::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const z2meson::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
