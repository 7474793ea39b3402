#pragma once

// Text formats.
//
// A semigroupoid file (.sgd) is line oriented; '#' starts a comment:
//
//   object X 0 1 2          # object with optional state labels
//   arrow a X -> Y : 1 0 0  # arrow with optional mapping (codomain labels,
//                           # one per domain state, in order)
//   compose a b = c         # explicit table entry
//
// Without compose lines the table is computed from the mappings.
//
// A functor file (.fun) names two semigroupoid files relative to itself:
//
//   source z4.sgd
//   target z2.sgd
//   map +1 -> +1'           # one or more targets, comma separated
//   staterel 0 -> 0         # only for transformation-level morphisms
//
// Labels are whitespace free; inside a list, commas nested in brackets
// belong to the label.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sgpoid/decomposition.hpp"
#include "sgpoid/error.hpp"
#include "sgpoid/relational.hpp"
#include "sgpoid/semigroupoid.hpp"
#include "sgpoid/transformation.hpp"

namespace sgpoid {

  //! Malformed or truncated input.
  class ParseError : public Error {
   public:
    ParseError(std::string const& source, std::size_t line, std::string const& msg)
        : Error(source + ":" + std::to_string(line) + ": " + msg), _line(line) {}

    [[nodiscard]] std::size_t line() const noexcept {
      return _line;
    }

   private:
    std::size_t _line;
  };

  struct SgdDocument {
    struct ObjectDecl {
      std::string              label;
      std::vector<std::string> states;
      std::size_t              line = 0;
    };
    struct ArrowDecl {
      std::string                             label;
      std::string                             dom;
      std::string                             cod;
      std::optional<std::vector<std::string>> images;
      std::size_t                             line = 0;
    };
    struct EntryDecl {
      std::string left, right, result;
      std::size_t line = 0;
    };

    std::string             name;
    std::vector<ObjectDecl> objects;
    std::vector<ArrowDecl>  arrows;
    std::vector<EntryDecl>  entries;

    //! Every object has states and every arrow a mapping.
    [[nodiscard]] bool is_concrete() const;
  };

  //! \throws ParseError
  SgdDocument parse_sgd(std::istream& in, std::string const& name);

  //! \throws StructuralError naming the line of a dangling or duplicate
  //! label.
  Semigroupoid to_semigroupoid(SgdDocument const& doc);

  //! \throws StructuralError as above, or if the document is not concrete.
  TransformationSemigroupoid to_transformation(SgdDocument const& doc);

  //! Reads and parses a file. \throws ParseError if it cannot be read.
  SgdDocument read_sgd(std::filesystem::path const& path);

  std::string emit_sgd(Semigroupoid const& s);
  std::string emit_sgd(TransformationSemigroupoid const& ts);

  struct FunctorDocument {
    struct MapDecl {
      std::string              from;
      std::vector<std::string> to;
      std::size_t              line = 0;
    };

    std::string                       name;
    std::filesystem::path             source;  // as resolved against the file
    std::filesystem::path             target;
    std::vector<MapDecl>              maps;
    std::vector<MapDecl>              staterels;
  };

  //! \p base is the directory the source and target paths are relative to.
  FunctorDocument parse_functor(std::istream&                in,
                                std::string const&           name,
                                std::filesystem::path const& base);

  FunctorDocument read_functor(std::filesystem::path const& path);

  //! The functor, or the transformation-level morphism when the file has
  //! staterel lines.
  using LoadedFunctor = std::variant<RelationalFunctor, RelationalMorphismTS>;

  //! \throws ParseError for the referenced files; StructuralError for
  //! dangling labels (with line numbers).
  LoadedFunctor load_functor(FunctorDocument const& doc);

  RelationalFunctor as_functor(LoadedFunctor const& f);

  std::string emit_functor(RelationalFunctor const& phi,
                           std::string const&       source_path,
                           std::string const&       target_path);

  //! Deep comparison, used for round trips.
  bool same_transformation_semigroupoid(TransformationSemigroupoid const& x,
                                        TransformationSemigroupoid const& y);

  ////////////////////////////////////////////////////////////////////////
  // Reports
  ////////////////////////////////////////////////////////////////////////

  std::string to_json(Semigroupoid const& s);
  std::string to_json(TransformationSemigroupoid const& ts);
  std::string to_json(ValidationReport const& r);
  std::string to_json(Decomposition const& d);
  std::string to_json(DiagnosticReport const& r,
                      TransformationSemigroupoid const& completed);

  std::string to_dot(Semigroupoid const& s, std::string const& name = "S");
  //! Top and kernel as clusters, the kernel drawn in its host.
  std::string to_dot(Decomposition const& d);

  std::string format_kernel(Decomposition const& d);
  std::string format_codec(Decomposition const& d);
  std::string format_rules(Decomposition const& d);
  std::string format_certificate(Decomposition const& d);
  std::string format_summary(Decomposition const& d);
  std::string format_diagnostic(DiagnosticReport const&           r,
                                TransformationSemigroupoid const& completed);

}  // namespace sgpoid
