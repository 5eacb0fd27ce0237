// ncfem: convergence studies and mesh utilities.
#include <iostream>

#include <CLI11.hpp>

#include "ncfem/study.hpp"

namespace {

int run_study_command(const std::string& config, std::optional<int> levels, std::optional<std::uint64_t> seed,
                      std::optional<std::string> out) {
  ncfem::StudyConfig cfg = ncfem::load_study_config(config);
  if (levels) cfg.levels = *levels;
  if (seed) cfg.seed = *seed;
  if (out) cfg.output = *out;

  ncfem::ConvergenceReport rep = ncfem::run_study(cfg);
  rep.write_markdown(std::cout);
  if (!cfg.output.empty()) std::cout << "\nreports written to " << cfg.output << '\n';
  return rep.passed() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonconforming finite element studies for diffusion-convection-reaction problems"};
  app.require_subcommand(1);

  std::string config;
  std::optional<int> levels;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  auto* study = app.add_subcommand("study", "run a convergence study from an INI config");
  study->add_option("--config", config, "study configuration file")->required();
  study->add_option("--levels", levels, "override the number of levels");
  study->add_option("--seed", seed, "override the random seed");
  study->add_option("--out", out, "override the output directory");

  app.add_subcommand("list-problems", "list registry problems with their condition audit");

  std::string mesh_path;
  auto* info = app.add_subcommand("mesh-info", "summarize an ASCII mesh file");
  info->add_option("meshfile", mesh_path, "mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*study) return run_study_command(config, levels, seed, out);
    if (app.got_subcommand("list-problems")) {
      ncfem::list_problems(std::cout);
      return 0;
    }
    if (*info) {
      ncfem::mesh_info(std::cout, ncfem::read_mesh_file(mesh_path));
      return 0;
    }
  } catch (const ncfem::Error& e) {
    std::cerr << "error [" << ncfem::to_string(e.code()) << "]: " << e.what() << '\n';
    return ncfem::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
