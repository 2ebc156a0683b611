// Copyright (c) 2026 the nhdfem developers.
// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nhdfem/config.hpp"
#include "nhdfem/drivers.hpp"
#include "nhdfem/types.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool serial = false;
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--config", args.config_path, "run configuration file")
      ->required();
  cmd.add_flag("--serial", args.serial, "disable assembly threading");
  cmd.add_option("--out", args.out_dir, "override the output directory");
}

int dispatch(const std::string& kind, const CommonArgs& args) {
  nhdfem::RunConfig config = nhdfem::parse_config_file(args.config_path);
  if (!args.out_dir.empty()) config.output.dir = args.out_dir;
  nhdfem::AssemblyOptions opt;
  opt.serial = args.serial;
  if (kind == "convergence") {
    nhdfem::run_convergence_study(config, std::cout, opt);
  } else if (kind == "scatter") {
    nhdfem::run_scattering(config, std::cout, opt);
  } else if (kind == "dispersion") {
    nhdfem::run_dispersion(config, std::cout);
  } else {
    nhdfem::run_mesh_info(config, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-domain Maxwell solver with a nonlocal current model"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* names[] = {"convergence", "scatter", "dispersion", "mesh-info"};
  const char* briefs[] = {
      "refinement study against the built-in reference solution",
      "plane-wave scattering sweep with extinction output",
      "tabulate the longitudinal permittivity over an omega/k grid",
      "print mesh statistics for the configured mesh"};
  for (int i = 0; i < 4; ++i) add_common(*app.add_subcommand(names[i], briefs[i]), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  std::string kind = app.get_subcommands().front()->get_name();
  try {
    return dispatch(kind, args);
  } catch (const nhdfem::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nhdfem::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const nhdfem::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
