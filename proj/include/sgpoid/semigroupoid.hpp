#pragma once

// Finite semigroupoids given by an explicit, sparse composition table.
//
// Arrows compose on the right: for f: X -> Y and g: Y -> Z the composite is
// written fg and has type X -> Z.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgpoid/report.hpp"

namespace sgpoid {

  using object_id = std::uint32_t;
  using arrow_id  = std::uint32_t;

  struct Object {
    object_id   id;
    std::string label;
  };

  struct Arrow {
    arrow_id    id;
    object_id   dom;
    object_id   cod;
    std::string label;
  };

  struct CompositionEntry {
    arrow_id left;
    arrow_id right;
    arrow_id result;

    friend bool operator==(CompositionEntry const&,
                           CompositionEntry const&) = default;
  };

  //! A finite set of arrow ids, kept sorted.
  class ArrowSet {
   public:
    using const_iterator = std::vector<arrow_id>::const_iterator;

    ArrowSet() = default;
    ArrowSet(std::initializer_list<arrow_id> ids) : _ids(ids) {
      normalise();
    }
    explicit ArrowSet(std::vector<arrow_id> ids) : _ids(std::move(ids)) {
      normalise();
    }

    void insert(arrow_id a) {
      auto it = std::lower_bound(_ids.begin(), _ids.end(), a);
      if (it == _ids.end() || *it != a) {
        _ids.insert(it, a);
      }
    }

    void insert(ArrowSet const& other) {
      std::vector<arrow_id> merged;
      merged.reserve(_ids.size() + other._ids.size());
      std::set_union(_ids.begin(),
                     _ids.end(),
                     other._ids.begin(),
                     other._ids.end(),
                     std::back_inserter(merged));
      _ids = std::move(merged);
    }

    [[nodiscard]] bool contains(arrow_id a) const {
      return std::binary_search(_ids.begin(), _ids.end(), a);
    }

    [[nodiscard]] bool is_subset_of(ArrowSet const& other) const {
      return std::includes(
          other._ids.begin(), other._ids.end(), _ids.begin(), _ids.end());
    }

    [[nodiscard]] bool intersects(ArrowSet const& other) const {
      auto i = _ids.begin();
      auto j = other._ids.begin();
      while (i != _ids.end() && j != other._ids.end()) {
        if (*i == *j) {
          return true;
        }
        *i < *j ? ++i : ++j;
      }
      return false;
    }

    [[nodiscard]] std::size_t size() const noexcept {
      return _ids.size();
    }
    [[nodiscard]] bool empty() const noexcept {
      return _ids.empty();
    }
    [[nodiscard]] arrow_id front() const {
      return _ids.front();
    }
    [[nodiscard]] const_iterator begin() const noexcept {
      return _ids.begin();
    }
    [[nodiscard]] const_iterator end() const noexcept {
      return _ids.end();
    }
    [[nodiscard]] std::vector<arrow_id> const& ids() const noexcept {
      return _ids;
    }

    friend bool operator==(ArrowSet const&, ArrowSet const&) = default;
    friend auto operator<=>(ArrowSet const& x, ArrowSet const& y) {
      return x._ids <=> y._ids;
    }

   private:
    void normalise() {
      std::sort(_ids.begin(), _ids.end());
      _ids.erase(std::unique(_ids.begin(), _ids.end()), _ids.end());
    }

    std::vector<arrow_id> _ids;
  };

  //! An immutable finite semigroupoid.
  //!
  //! Construction only checks that every id resolves; whether the table is a
  //! genuine semigroupoid (closure, typing, associativity) is answered by
  //! validate_semigroupoid(), so that defective candidates can be built and
  //! reported on.
  class Semigroupoid {
   public:
    Semigroupoid() = default;

    //! \throws StructuralError if object or arrow ids are not 0, 1, ..., or
    //! if an arrow or table entry references something that does not exist,
    //! or if a pair (f, g) has two table entries.
    Semigroupoid(std::vector<Object>           objects,
                 std::vector<Arrow>            arrows,
                 std::vector<CompositionEntry> entries);

    [[nodiscard]] std::size_t number_of_objects() const noexcept {
      return _objects.size();
    }
    [[nodiscard]] std::size_t number_of_arrows() const noexcept {
      return _arrows.size();
    }
    [[nodiscard]] std::size_t number_of_entries() const noexcept {
      return _number_of_entries;
    }

    [[nodiscard]] Object const& object(object_id x) const;
    [[nodiscard]] Arrow const&  arrow(arrow_id f) const;

    [[nodiscard]] std::span<Object const> objects() const noexcept {
      return _objects;
    }
    [[nodiscard]] std::span<Arrow const> arrows() const noexcept {
      return _arrows;
    }

    [[nodiscard]] object_id dom(arrow_id f) const {
      return arrow(f).dom;
    }
    [[nodiscard]] object_id cod(arrow_id f) const {
      return arrow(f).cod;
    }

    [[nodiscard]] bool composable(arrow_id f, arrow_id g) const {
      return arrow(f).cod == arrow(g).dom;
    }

    //! The table entry for (f, g), whether or not the pair is well typed.
    [[nodiscard]] std::optional<arrow_id> entry(arrow_id f, arrow_id g) const;

    //! fg if f, g are composable and the table has the entry.
    [[nodiscard]] std::optional<arrow_id> try_compose(arrow_id f,
                                                      arrow_id g) const {
      if (_arrows[f].cod != _arrows[g].dom) {
        return std::nullopt;
      }
      return entry(f, g);
    }

    //! Arrows with domain x, in id order.
    [[nodiscard]] std::span<arrow_id const> arrows_from(object_id x) const {
      return _from.at(x);
    }
    //! Arrows with codomain y, in id order.
    [[nodiscard]] std::span<arrow_id const> arrows_to(object_id y) const {
      return _to.at(y);
    }

    //! All table entries ordered by (left, right).
    [[nodiscard]] std::vector<CompositionEntry> entries() const;

    [[nodiscard]] std::optional<arrow_id>
    find_arrow(std::string const& label) const;
    [[nodiscard]] std::optional<object_id>
    find_object(std::string const& label) const;

    //! "X->Y" with object labels.
    [[nodiscard]] std::string type_string(arrow_id f) const;

    friend bool operator==(Semigroupoid const& x, Semigroupoid const& y);

   private:
    std::vector<Object>                                   _objects;
    std::vector<Arrow>                                    _arrows;
    std::vector<std::vector<std::pair<arrow_id, arrow_id>>> _rows;
    std::vector<std::vector<arrow_id>>                    _from;
    std::vector<std::vector<arrow_id>>                    _to;
    std::size_t                                           _number_of_entries = 0;
  };

  //! fg.
  //!
  //! \throws NotComposable if cod(f) != dom(g); the exception carries both
  //! types. \throws StructuralError if the pair is composable but the table
  //! has no entry.
  arrow_id compose(Semigroupoid const& s, arrow_id f, arrow_id g);

  //! {fg : f in p, g in q, cod(f) = dom(g)}; ill-typed pairs are skipped.
  ArrowSet compose_sets(Semigroupoid const& s,
                        ArrowSet const&     p,
                        ArrowSet const&     q);

  //! The hom-set S(x, y).
  ArrowSet hom_set(Semigroupoid const& s, object_id x, object_id y);

  //! Every violated semigroupoid axiom, with witnessing pairs/triples.
  ValidationReport validate_semigroupoid(Semigroupoid const& s);

  //! Objects that occur as a domain or codomain of some arrow of p.
  std::vector<object_id> supporting_objects(Semigroupoid const& s,
                                            ArrowSet const&     p);

  //! The smallest sub-semigroupoid of s containing the given arrows: its
  //! objects are those touched by the closure, relabelled contiguously.
  //! \p embedding receives, for each arrow of the result, the arrow of s it
  //! came from.
  Semigroupoid sub_semigroupoid(Semigroupoid const&    s,
                                ArrowSet const&        generators,
                                std::vector<arrow_id>* embedding = nullptr);

}  // namespace sgpoid
