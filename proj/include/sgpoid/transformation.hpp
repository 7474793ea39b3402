#pragma once

// Concrete representations: objects realised as finite state sets, arrows as
// total functions between them.  Functions act on the right, so the composite
// of t1 followed by t2 maps x to t2(t1(x)).

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sgpoid/relational.hpp"
#include "sgpoid/semigroupoid.hpp"

namespace sgpoid {

  using state_id = std::uint32_t;

  struct StateSet {
    std::string              label;
    std::vector<std::string> states;
  };

  //! A total function between two state sets, stored as the image index of
  //! every domain state.
  struct Transformation {
    object_id             dom = 0;
    object_id             cod = 0;
    std::vector<state_id> images;

    friend bool operator==(Transformation const&,
                           Transformation const&) = default;
    friend auto operator<=>(Transformation const&,
                            Transformation const&) = default;
  };

  //! \throws DomainError if x is not a state of the domain.
  state_id apply(Transformation const& t, state_id x);

  //! x -> t2(t1(x)). \throws NotComposable if cod(t1) != dom(t2).
  Transformation compose_transformations(Transformation const& t1,
                                         Transformation const& t2);

  bool is_permutation(Transformation const& t);

  //! Sorted, duplicate free image of t.
  std::vector<state_id> image(Transformation const& t);

  //! A finite family of state sets with typed transformations between them,
  //! together with the abstract semigroupoid those transformations induce.
  class TransformationSemigroupoid {
   public:
    struct TypedArrow {
      std::string    label;
      Transformation map;
    };

    TransformationSemigroupoid() = default;

    //! The abstract table is computed by composing mappings unless
    //! \p entries is given, in which case it is taken verbatim (and
    //! validate_transformation_semigroupoid() checks it against the mappings).
    //!
    //! \throws StructuralError for empty state sets, dangling object ids, or
    //! mappings whose arity or entries do not fit the declared state sets.
    TransformationSemigroupoid(
        std::vector<StateSet>                        state_sets,
        std::vector<TypedArrow>                      arrows,
        std::optional<std::vector<CompositionEntry>> entries = std::nullopt);

    [[nodiscard]] std::vector<StateSet> const& state_sets() const noexcept {
      return _state_sets;
    }
    [[nodiscard]] StateSet const& state_set(object_id x) const {
      return _state_sets.at(x);
    }
    [[nodiscard]] std::size_t number_of_arrows() const noexcept {
      return _arrows.size();
    }
    [[nodiscard]] std::vector<TypedArrow> const& arrows() const noexcept {
      return _arrows;
    }
    [[nodiscard]] Transformation const& transformation(arrow_id f) const {
      return _arrows.at(f).map;
    }
    [[nodiscard]] Semigroupoid const& abstract() const noexcept {
      return *_abstract;
    }
    [[nodiscard]] std::shared_ptr<Semigroupoid const> const&
    abstract_ptr() const noexcept {
      return _abstract;
    }
    [[nodiscard]] std::optional<arrow_id> find(Transformation const& t) const;

    [[nodiscard]] std::size_t total_states() const;

    //! Label of state x of object o.
    [[nodiscard]] std::string const& state_label(object_id o, state_id x) const {
      return _state_sets.at(o).states.at(x);
    }

   private:
    std::vector<StateSet>                _state_sets;
    std::vector<TypedArrow>              _arrows;
    std::shared_ptr<Semigroupoid const>  _abstract;
    std::map<Transformation, arrow_id>   _index;
  };

  //! Closure under composition, extensional distinctness and agreement of the
  //! abstract table with function composition, plus the semigroupoid axioms.
  ValidationReport
  validate_transformation_semigroupoid(TransformationSemigroupoid const& ts);

  //! Breadth-first closure of the generators: arrows are processed in id
  //! order and multiplied on the right by each generator in turn, so ids are
  //! reproducible.  Generators keep their labels, composites are labelled by
  //! the word that first produced them ("a.b").
  //!
  //! \throws StructuralError if a generator is ill typed.
  TransformationSemigroupoid
  generate_closure(std::vector<StateSet>                                state_sets,
                   std::vector<TransformationSemigroupoid::TypedArrow> const& generators);

  //! Image sets {X.s : s in S} of a one-object transformation semigroupoid,
  //! ordered by decreasing size then lexicographically.
  //!
  //! \throws Unsupported for more than one object.
  std::vector<std::vector<state_id>>
  image_sets(TransformationSemigroupoid const& ts);

  //! A relational morphism (phi0, phi1) between one-object transformation
  //! semigroupoids.
  struct RelationalMorphismTS {
    std::shared_ptr<TransformationSemigroupoid const> source;
    std::shared_ptr<TransformationSemigroupoid const> target;
    //! phi0: source state -> target states.
    std::vector<std::vector<state_id>> state_rel;
    //! phi1: source arrow -> target arrows.
    std::vector<ArrowSet> arrow_rel;

    //! phi1 as a relational functor between the abstract semigroupoids.
    [[nodiscard]] RelationalFunctor arrow_functor() const;
  };

  struct ImageTyping {
    std::shared_ptr<TransformationSemigroupoid const> typed;
    //! ts -> typed, every arrow to its restrictions.
    RelationalFunctor functor;
  };

  //! One object per image set (the full state set is object 0 whether or not
  //! it is an image) and, for every arrow s and object A, the restriction
  //! s|A : A -> A.s.  Restrictions are deduplicated per (objects, mapping).
  //!
  //! \throws Unsupported for more than one object.
  ImageTyping image_typed_semigroupoid(TransformationSemigroupoid const& ts);

  struct PinholeTyping {
    //! Objects are the preimages pre(y) = {x : y in phi0(x)} of target states.
    std::shared_ptr<TransformationSemigroupoid const> typed;
    //! typed -> target (abstract), s|pre(y) -> {t in phi1(s) : y.t = y'}.
    RelationalFunctor projection;
    //! source (abstract) -> typed, s -> all its restriction arrows.
    RelationalFunctor restriction;
    //! The target state (pinhole) indexing each object of typed.
    std::vector<state_id> pinholes;
    //! (source arrow s, target arrow t in phi1(s), object of typed) -> the
    //! restriction s|pre(y) : pre(y) -> pre(y.t).
    std::map<std::tuple<arrow_id, arrow_id, object_id>, arrow_id>
        restriction_index;
  };

  //! \throws ValidationError if m does not validate.
  PinholeTyping pinhole_typed_semigroupoid(RelationalMorphismTS const& m);

  //! x -> X\{x}; permutations to themselves; every other s to the constant
  //! maps onto states outside its image.  The target is the closure of the
  //! images.
  //!
  //! \throws DegenerateError if |X| = 1, Unsupported if ts has several
  //! objects.
  RelationalMorphismTS
  holonomy_seed_morphism(std::shared_ptr<TransformationSemigroupoid const> ts);

  struct OrbitWitness {
    std::string                 generator;
    Transformation              element;
    std::vector<Transformation> orbit;
  };

  struct DiagnosticReport {
    std::size_t                 original_arrow_count  = 0;
    std::size_t                 completed_arrow_count = 0;
    std::size_t                 state_count           = 0;
    std::vector<Transformation> new_elements;
    std::optional<OrbitWitness> orbit_witness;
    //! Ordered pairs of completed originals whose product is the fully
    //! undefined map (sink completion only).
    std::size_t sink_absorbed = 0;
  };

  struct Completion {
    TransformationSemigroupoid semigroup;
    DiagnosticReport           report;
  };

  //! Each typed arrow becomes a transformation of the disjoint union of all
  //! state sets that is the identity outside its domain; the closure of these
  //! is compared with the padded originals.
  Completion pad_with_identities(TransformationSemigroupoid const& ts);

  //! Adds a sink state "_"; states outside an arrow's domain (and the sink)
  //! go to the sink, so ill-typed composites become the fully undefined map.
  Completion sink_completion(TransformationSemigroupoid const& ts);

  //! The one-object transformation semigroupoid of all n^n maps of
  //! {0, ..., n-1}, generated by a transposition, an n-cycle and a rank n-1
  //! idempotent.
  TransformationSemigroupoid full_transformation_semigroup(std::size_t n);

}  // namespace sgpoid
