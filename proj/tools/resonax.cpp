// resonax: resonances, virtual and bound states of multichannel
// Schroedinger operators from the zeros of det s_ell(z).

#include <iostream>

#include <CLI11.hpp>

#include "resonax/commands.hpp"

using namespace resonax;

int main(int argc, char** argv) {
  CLI::App app{"Locate resonances on unphysical sheets of multichannel scattering models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a model config and print a summary");
  validate->add_option("config", validate_config, "Model JSON")->required();

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Tabulate det s_ell over a rectangle (CSV)");
  scan_cmd->add_option("config", scan.config, "Model JSON")->required();
  scan_cmd->add_option("--sheet", scan.sheet, "Sheet bits, e.g. 1,0,1")->required();
  scan_cmd->add_option("--region", scan.region, "re_min,re_max,im_min,im_max")->required();
  scan_cmd->add_option("--nx", scan.nx, "Cells along Re z")->capture_default_str();
  scan_cmd->add_option("--ny", scan.ny, "Cells along Im z")->capture_default_str();
  scan_cmd->add_option("--out", scan.out, "CSV path (default stdout)");
  scan_cmd->add_option("--report", scan.report, "Run report JSON path");

  FindArgs find;
  auto* find_cmd = app.add_subcommand("find", "Count, refine and classify zeros (JSON)");
  find_cmd->add_option("config", find.config, "Model JSON")->required();
  find_cmd->add_option("--sheet", find.sheet, "Sheet bits, e.g. 1,1");
  find_cmd->add_option("--region", find.region, "re_min,re_max,im_min,im_max")->required();
  find_cmd->add_option("--nx", find.nx, "Seed scan cells along Re z")->capture_default_str();
  find_cmd->add_option("--ny", find.ny, "Seed scan cells along Im z")->capture_default_str();
  find_cmd->add_option("--boundary-points", find.boundary_points, "Initial contour samples")
      ->capture_default_str();
  find_cmd->add_flag("--bound-states", find.bound_states,
                     "Search zeros of det(I + K) on the physical sheet instead");
  find_cmd->add_option("--out", find.out, "JSON path (default stdout)");
  find_cmd->add_option("--report", find.report, "Run report JSON path");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the continuation identity suite");
  verify_cmd->add_option("config", verify.config, "Model JSON")->required();
  verify_cmd->add_option("--samples", verify.samples, "Random sample points")->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "RNG seed")->capture_default_str();
  verify_cmd->add_option("--report", verify.report, "Run report JSON path");
  verify_cmd->add_flag("--flip-a-sign", verify.flip_a_sign)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*validate) return cmd_validate(validate_config, std::cout, std::cerr);
  if (*scan_cmd) return cmd_scan(scan, std::cout, std::cerr);
  if (*find_cmd) return cmd_find(find, std::cout, std::cerr);
  return cmd_verify(verify, std::cout, std::cerr);
}
