// latticeqfi: tilt estimation on driven Bose-Hubbard chains.
//
//   latticeqfi <evolve|qfi|scan|scaling|spectrum> --config <path>
//              [--out <dir>] [--threads <n>] [--emit-plot]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "latticeqfi/commands.hpp"
#include "latticeqfi/output.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information of tilted and driven Bose-Hubbard chains"};
  app.set_version_flag("--version", "latticeqfi " + std::string(latticeqfi::version()));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  unsigned threads = 1;
  bool emit_plot = false;

  const char* commands[][2] = {
      {"evolve", "occupations, norm and G along the time axis"},
      {"qfi", "F(T) and F/T^2 with first-peak summary"},
      {"scan", "F/T^2 over the (T, U) grid and the interaction optimum"},
      {"scaling", "first-peak F_max and tau against M"},
      {"spectrum", "eigenvalues, overlaps and gap estimate against U"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "worker threads for grid scans")
        ->check(CLI::Range(1u, 1024u));
    sub->add_flag("--emit-plot", emit_plot, "write a gnuplot script next to each CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : latticeqfi::kExitConfig;
  }

  latticeqfi::CommandOptions options;
  if (!out.empty()) options.out_dir = out;
  options.threads = threads;
  options.emit_plot = emit_plot;
  return latticeqfi::run_command(app.get_subcommands().front()->get_name(), config, options,
                                 std::cerr);
}
