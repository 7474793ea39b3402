// sgpoid: validate, generate, decompose, draw and diagnose finite
// semigroupoids.  See README.md for the file formats.

#include <iostream>

#include "CLI11.hpp"
#include "sgpoid/commands.hpp"

int main(int argc, char** argv) {
  using namespace sgpoid;
  CLI::App app{"Hierarchical decomposition of finite semigroupoids"};
  app.require_subcommand(1);

  std::string path, out, out_dir, strategy = "objects", format = "text",
                                   mode = "pad";
  auto strategies = CLI::IsMember({"sets", "objects", "none"});
  auto formats    = CLI::IsMember({"text", "json", "dot"});

  auto* validate = app.add_subcommand("validate", "validate a .sgd or .fun file");
  validate->add_option("file", path)->required();
  validate->add_option("--format", format)->check(formats);

  auto* generate = app.add_subcommand("generate", "close the arrows of a .sgd file");
  generate->add_option("file", path)->required();
  generate->add_option("--out", out, "output file (default stdout)");
  generate->add_option("--format", format)->check(formats);

  auto* decomp = app.add_subcommand("decompose", "decompose along a .fun file");
  decomp->add_option("file", path)->required();
  decomp->add_option("--strategy", strategy)->check(strategies);
  decomp->add_option("--out-dir", out_dir, "directory for the output files");
  decomp->add_option("--format", format)->check(formats);

  auto* dot = app.add_subcommand("dot", "render a .sgd or .fun file as DOT");
  dot->add_option("file", path)->required();
  dot->add_option("--strategy", strategy)->check(strategies);
  dot->add_option("--out", out, "output file (default stdout)");

  auto* diagnose = app.add_subcommand("diagnose", "identity padding or sink completion");
  diagnose->add_option("file", path)->required();
  diagnose->add_option("--mode", mode)->check(CLI::IsMember({"pad", "sink"}));
  diagnose->add_option("--format", format)->check(formats);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_parse_error;
  }

  auto opt = [](std::string const& s) -> std::optional<std::filesystem::path> {
    if (s.empty()) {
      return std::nullopt;
    }
    return std::filesystem::path(s);
  };
  Format fmt = parse_format(format);
  if (*validate) {
    return cmd_validate(path, fmt, std::cout, std::cerr);
  }
  if (*generate) {
    return cmd_generate(path, opt(out), fmt, std::cout, std::cerr);
  }
  if (*decomp) {
    return cmd_decompose(path, parse_strategy(strategy), opt(out_dir), fmt,
                         std::cout, std::cerr);
  }
  if (*dot) {
    return cmd_dot(path, parse_strategy(strategy), opt(out), std::cout, std::cerr);
  }
  return cmd_diagnose(path, mode, fmt, std::cout, std::cerr);
}
