#pragma once

// Relational functors: every source arrow is related to a non-empty set of
// target arrows, not necessarily of one type.  A candidate is plain data; it
// is a relational functor when validate_relational_functor() returns an empty
// report.

#include <memory>
#include <utility>
#include <vector>

#include "sgpoid/report.hpp"
#include "sgpoid/semigroupoid.hpp"

namespace sgpoid {

  struct RelationalMorphismTS;

  class RelationalFunctor {
   public:
    RelationalFunctor() = default;

    //! \throws StructuralError if the map does not have one entry per source
    //! arrow or mentions a target arrow that does not exist.
    RelationalFunctor(std::shared_ptr<Semigroupoid const> source,
                      std::shared_ptr<Semigroupoid const> target,
                      std::vector<ArrowSet>               arrow_map);

    [[nodiscard]] Semigroupoid const& source() const noexcept {
      return *_source;
    }
    [[nodiscard]] Semigroupoid const& target() const noexcept {
      return *_target;
    }
    [[nodiscard]] std::shared_ptr<Semigroupoid const> const&
    source_ptr() const noexcept {
      return _source;
    }
    [[nodiscard]] std::shared_ptr<Semigroupoid const> const&
    target_ptr() const noexcept {
      return _target;
    }
    [[nodiscard]] ArrowSet const& image(arrow_id f) const {
      return _map.at(f);
    }
    [[nodiscard]] std::vector<ArrowSet> const& arrow_map() const noexcept {
      return _map;
    }

    friend bool operator==(RelationalFunctor const& x,
                           RelationalFunctor const& y) {
      return x._map == y._map;
    }

   private:
    std::shared_ptr<Semigroupoid const> _source;
    std::shared_ptr<Semigroupoid const> _target;
    std::vector<ArrowSet>               _map;
  };

  //! Empty iff every image is non-empty and, for all composable (f, g),
  //! phi(f)phi(g) is non-empty and contained in phi(fg).  Non-composable
  //! pairs impose nothing.
  ValidationReport validate_relational_functor(RelationalFunctor const& phi);

  //! \throws ValidationError carrying the report if phi is not valid.
  void require_valid(RelationalFunctor const& phi);

  struct ObjectRelation {
    std::vector<std::pair<object_id, object_id>> pairs;  // sorted

    [[nodiscard]] bool contains(object_id x, object_id y) const;
    [[nodiscard]] std::vector<object_id> image(object_id x) const;
  };

  //! The smallest relation containing (dom f, dom f') and (cod f, cod f') for
  //! every f' in phi(f).
  ObjectRelation induced_object_relation(RelationalFunctor const& phi);

  //! (phi tau)(f) = union of tau(f') over f' in phi(f).
  //!
  //! \throws StructuralError if the target of phi is not the source of tau.
  RelationalFunctor compose_functors(RelationalFunctor const& phi,
                                     RelationalFunctor const& tau);

  struct Classification {
    bool surjective = false;
    bool injective  = false;
  };

  Classification classify(RelationalFunctor const& phi);

  //! Target arrows not in any image.
  std::vector<arrow_id> uncovered_arrows(RelationalFunctor const& phi);

  //! Pairs of distinct source arrows whose images intersect.
  std::vector<std::pair<arrow_id, arrow_id>>
  overlapping_images(RelationalFunctor const& phi);

  //! phi^{-1}(f) = {a : f in phi(a)} for every target arrow f.
  //!
  //! \throws ValidationError naming the target arrows with empty preimage if
  //! phi is not surjective.
  std::vector<ArrowSet> preimages(RelationalFunctor const& phi);

  RelationalFunctor identity_functor(std::shared_ptr<Semigroupoid const> s);

  //! Empty iff phi0 and phi1 are fully defined and phi0(x).phi1(s) is a
  //! subset of phi0(x.s) for every state x and arrow s.
  ValidationReport
  validate_relational_morphism_ts(RelationalMorphismTS const& m);

}  // namespace sgpoid
