#include "sgpoid/commands.hpp"

#include <fstream>
#include <ostream>

#include "sgpoid/error.hpp"
#include "sgpoid/io.hpp"

namespace sgpoid {

  namespace {
    bool is_functor_file(std::filesystem::path const& path) {
      return path.extension() == ".fun";
    }

    bool write_file(std::filesystem::path const& path,
                    std::string const&           text,
                    std::ostream&                err) {
      std::ofstream f(path, std::ios::binary);
      f << text;
      if (!f) {
        err << "error: cannot write " << path.string() << '\n';
        return false;
      }
      return true;
    }

    // Runs body, mapping library exceptions to exit codes.
    template <typename Body>
    int guarded(std::ostream& err, Body&& body) {
      try {
        return body();
      } catch (ParseError const& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_parse_error;
      } catch (Error const& e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
      }
    }

    void section(std::ostream&           out,
                 std::string const&      title,
                 ValidationReport const& r) {
      out << title << ": " << r;
    }
  }  // namespace

  Format parse_format(std::string const& name) {
    if (name == "text") {
      return Format::text;
    }
    if (name == "json") {
      return Format::json;
    }
    if (name == "dot") {
      return Format::dot;
    }
    throw Unsupported("unknown format \"" + name + "\"");
  }

  int cmd_validate(std::filesystem::path const& path,
                   Format                       format,
                   std::ostream&                out,
                   std::ostream&                err) {
    return guarded(err, [&]() -> int {
      if (!is_functor_file(path)) {
        auto             doc = read_sgd(path);
        ValidationReport report;
        if (doc.is_concrete() && !doc.arrows.empty()) {
          report = validate_transformation_semigroupoid(to_transformation(doc));
        } else {
          report = validate_semigroupoid(to_semigroupoid(doc));
        }
        if (format == Format::json) {
          out << to_json(report);
        } else {
          out << report;
        }
        return report.ok() ? exit_ok : exit_invalid;
      }

      auto             loaded = load_functor(read_functor(path));
      auto             phi    = as_functor(loaded);
      bool             ok     = true;
      ValidationReport all;
      auto             add = [&](std::string const& title, ValidationReport const& r) {
        ok = ok && r.ok();
        all.append(r);
        if (format == Format::text) {
          section(out, title, r);
        }
      };
      if (auto const* m = std::get_if<RelationalMorphismTS>(&loaded)) {
        add("source", validate_transformation_semigroupoid(*m->source));
        add("target", validate_transformation_semigroupoid(*m->target));
        add("state relation", validate_relational_morphism_ts(*m));
      } else {
        add("source", validate_semigroupoid(phi.source()));
        add("target", validate_semigroupoid(phi.target()));
      }
      add("functor", validate_relational_functor(phi));
      if (format == Format::json) {
        out << to_json(all);
      } else {
        auto c = classify(phi);
        out << "surjective: " << (c.surjective ? "yes" : "no") << '\n'
            << "injective: " << (c.injective ? "yes" : "no") << '\n';
      }
      return ok ? exit_ok : exit_invalid;
    });
  }

  int cmd_generate(std::filesystem::path const&                path,
                   std::optional<std::filesystem::path> const& out_path,
                   Format                                      format,
                   std::ostream&                               out,
                   std::ostream&                               err) {
    return guarded(err, [&]() -> int {
      auto doc = read_sgd(path);
      if (!doc.is_concrete()) {
        err << "error: " << path.string()
            << ": generate needs states and mappings for every arrow\n";
        return exit_invalid;
      }
      auto gens   = to_transformation(doc);
      auto closed = generate_closure(gens.state_sets(), gens.arrows());
      auto text   = format == Format::json ? to_json(closed) : emit_sgd(closed);
      if (out_path) {
        return write_file(*out_path, text, err) ? exit_ok : exit_invalid;
      }
      out << text;
      return exit_ok;
    });
  }

  namespace {
    // Checks a loaded functor file; returns an exit code on failure.
    std::optional<int> check_loaded(LoadedFunctor const& loaded, std::ostream& err) {
      auto phi = as_functor(loaded);
      if (auto const* m = std::get_if<RelationalMorphismTS>(&loaded)) {
        auto r = validate_relational_morphism_ts(*m);
        if (!r.ok()) {
          err << "invalid relational morphism:\n" << r;
          return exit_invalid;
        }
      }
      auto r = validate_relational_functor(phi);
      if (!r.ok()) {
        err << "invalid relational functor:\n" << r;
        return exit_invalid;
      }
      auto missing = uncovered_arrows(phi);
      if (!missing.empty()) {
        err << "relational functor is not surjective; empty preimage for:";
        for (arrow_id f : missing) {
          err << ' ' << phi.target().arrow(f).label;
        }
        err << '\n';
        return exit_invalid;
      }
      return std::nullopt;
    }

    Decomposition run(LoadedFunctor const& loaded, Strategy strategy) {
      if (auto const* m = std::get_if<RelationalMorphismTS>(&loaded)) {
        return decompose(*m, strategy);
      }
      return decompose(std::get<RelationalFunctor>(loaded), strategy);
    }
  }  // namespace

  int cmd_decompose(std::filesystem::path const&                path,
                    Strategy                                    strategy,
                    std::optional<std::filesystem::path> const& out_dir,
                    Format                                      format,
                    std::ostream&                               out,
                    std::ostream&                               err) {
    return guarded(err, [&]() -> int {
      auto loaded = load_functor(read_functor(path));
      if (auto code = check_loaded(loaded, err)) {
        return *code;
      }
      auto d = run(loaded, strategy);
      if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        bool ok = write_file(*out_dir / "kernel.txt", format_kernel(d), err)
                  && write_file(*out_dir / "codec.txt", format_codec(d), err)
                  && write_file(*out_dir / "rules.txt", format_rules(d), err)
                  && write_file(*out_dir / "certificate.txt", format_certificate(d), err)
                  && write_file(*out_dir / "cascade.sgd",
                                emit_sgd(*d.cascade.cascade.product), err)
                  && write_file(*out_dir / "top.sgd", emit_sgd(d.phi.target()), err)
                  && write_file(*out_dir / "host.sgd", emit_sgd(*d.kernel.codec.host), err)
                  && write_file(*out_dir / "decomposition.json", to_json(d), err);
        if (!ok) {
          return exit_invalid;
        }
      }
      if (format == Format::json) {
        out << to_json(d);
      } else if (format == Format::dot) {
        out << to_dot(d);
      } else {
        out << format_summary(d);
      }
      bool valid = d.cascade.certificate.valid() && d.tracing.certificate.valid();
      if (!valid) {
        err << "emulation certificate failed:\n"
            << d.tracing.certificate.report << d.cascade.certificate.report;
      }
      return valid ? exit_ok : exit_certificate;
    });
  }

  int cmd_dot(std::filesystem::path const&                path,
              Strategy                                    strategy,
              std::optional<std::filesystem::path> const& out_path,
              std::ostream&                               out,
              std::ostream&                               err) {
    return guarded(err, [&]() -> int {
      std::string text;
      if (is_functor_file(path)) {
        auto loaded = load_functor(read_functor(path));
        if (auto code = check_loaded(loaded, err)) {
          return *code;
        }
        text = to_dot(run(loaded, strategy));
      } else {
        auto doc = read_sgd(path);
        text     = to_dot(to_semigroupoid(doc), path.stem().string());
      }
      if (out_path) {
        return write_file(*out_path, text, err) ? exit_ok : exit_invalid;
      }
      out << text;
      return exit_ok;
    });
  }

  int cmd_diagnose(std::filesystem::path const& path,
                   std::string const&           mode,
                   Format                       format,
                   std::ostream&                out,
                   std::ostream&                err) {
    return guarded(err, [&]() -> int {
      auto doc = read_sgd(path);
      if (!doc.is_concrete() || doc.arrows.empty()) {
        err << "error: " << path.string()
            << ": diagnose needs a transformation semigroupoid (states and "
               "mappings)\n";
        return exit_invalid;
      }
      if (mode != "pad" && mode != "sink") {
        err << "error: unknown mode \"" << mode << "\", expected pad or sink\n";
        return exit_invalid;
      }
      auto ts = to_transformation(doc);
      auto c  = mode == "pad" ? pad_with_identities(ts) : sink_completion(ts);
      if (format == Format::json) {
        out << to_json(c.report, c.semigroup);
      } else {
        out << "mode: " << mode << '\n' << format_diagnostic(c.report, c.semigroup);
      }
      return exit_ok;
    });
  }

}  // namespace sgpoid
