#pragma once

// The sgpoid commands, callable without a process boundary.
//
// Exit codes: 0 success, 1 validation failure, 2 parse error (or unreadable
// input), 3 emulation certificate failure.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "sgpoid/decomposition.hpp"

namespace sgpoid {

  enum ExitCode : int {
    exit_ok          = 0,
    exit_invalid     = 1,
    exit_parse_error = 2,
    exit_certificate = 3
  };

  enum class Format { text, json, dot };

  //! \throws Unsupported for an unknown name.
  Format parse_format(std::string const& name);

  //! .sgd: semigroupoid (and transformation) validation; .fun: validation of
  //! both sides and of the functor (and of the state relation if present).
  int cmd_validate(std::filesystem::path const& path,
                   Format                       format,
                   std::ostream&                out,
                   std::ostream&                err);

  //! Closure of the arrows of a concrete file, written to \p out_path or
  //! \p out.
  int cmd_generate(std::filesystem::path const&                path,
                   std::optional<std::filesystem::path> const& out_path,
                   Format                                      format,
                   std::ostream&                               out,
                   std::ostream&                               err);

  //! Writes kernel.txt, codec.txt, rules.txt, certificate.txt, cascade.sgd,
  //! top.sgd, host.sgd and decomposition.json to \p out_dir if given; prints
  //! a summary.
  int cmd_decompose(std::filesystem::path const&                path,
                    Strategy                                    strategy,
                    std::optional<std::filesystem::path> const& out_dir,
                    Format                                      format,
                    std::ostream&                               out,
                    std::ostream&                               err);

  //! A .sgd file as one digraph, a .fun file as its decomposition.
  int cmd_dot(std::filesystem::path const&                path,
              Strategy                                    strategy,
              std::optional<std::filesystem::path> const& out_path,
              std::ostream&                               out,
              std::ostream&                               err);

  //! mode is "pad" or "sink".
  int cmd_diagnose(std::filesystem::path const& path,
                   std::string const&           mode,
                   Format                       format,
                   std::ostream&                out,
                   std::ostream&                err);

}  // namespace sgpoid
