#include "sgpoid/relational.hpp"

#include <sstream>

#include "sgpoid/error.hpp"
#include "sgpoid/transformation.hpp"

namespace sgpoid {

  namespace {
    std::string set_string(Semigroupoid const& s, ArrowSet const& p) {
      std::string out = "{";
      bool        first = true;
      for (arrow_id f : p) {
        if (!first) {
          out += ",";
        }
        first = false;
        out += s.arrow(f).label;
      }
      return out + "}";
    }
  }  // namespace

  RelationalFunctor::RelationalFunctor(std::shared_ptr<Semigroupoid const> source,
                                       std::shared_ptr<Semigroupoid const> target,
                                       std::vector<ArrowSet> arrow_map)
      : _source(std::move(source)),
        _target(std::move(target)),
        _map(std::move(arrow_map)) {
    if (!_source || !_target) {
      throw StructuralError("relational functor needs a source and a target");
    }
    if (_map.size() != _source->number_of_arrows()) {
      throw StructuralError("relational functor maps "
                            + std::to_string(_map.size())
                            + " arrows but the source has "
                            + std::to_string(_source->number_of_arrows()));
    }
    for (auto const& img : _map) {
      for (arrow_id f : img) {
        if (f >= _target->number_of_arrows()) {
          throw StructuralError("relational functor references dangling "
                                "target arrow id "
                                + std::to_string(f));
        }
      }
    }
  }

  ValidationReport validate_relational_functor(RelationalFunctor const& phi) {
    ValidationReport    report;
    Semigroupoid const& s = phi.source();
    Semigroupoid const& t = phi.target();

    for (auto const& a : s.arrows()) {
      if (phi.image(a.id).empty()) {
        report.add(ViolationKind::empty_image,
                   "arrow " + a.label + " has an empty image",
                   {a.id});
      }
    }
    for (auto const& a : s.arrows()) {
      for (arrow_id g : s.arrows_from(a.cod)) {
        auto fg = s.try_compose(a.id, g);
        if (!fg) {
          continue;  // not a semigroupoid; reported by validate_semigroupoid
        }
        ArrowSet composite = compose_sets(t, phi.image(a.id), phi.image(g));
        if (composite.empty()) {
          report.add(ViolationKind::empty_composite,
                     "phi(" + a.label + ")phi(" + s.arrow(g).label
                         + ") is empty",
                     {a.id, g});
          continue;
        }
        ArrowSet const& expected = phi.image(*fg);
        for (arrow_id h : composite) {
          if (!expected.contains(h)) {
            report.add(ViolationKind::incompatible,
                       "phi(" + a.label + ")phi(" + s.arrow(g).label + ") = "
                           + set_string(t, composite) + " is not inside phi("
                           + s.arrow(*fg).label
                           + ") = " + set_string(t, expected) + ", offending "
                           + t.arrow(h).label,
                       {a.id, g, h});
          }
        }
      }
    }
    return report;
  }

  void require_valid(RelationalFunctor const& phi) {
    auto report = validate_relational_functor(phi);
    if (!report.ok()) {
      std::ostringstream os;
      os << "invalid relational functor:\n" << report;
      throw ValidationError(os.str());
    }
  }

  bool ObjectRelation::contains(object_id x, object_id y) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::pair{x, y});
  }

  std::vector<object_id> ObjectRelation::image(object_id x) const {
    std::vector<object_id> out;
    for (auto const& [a, b] : pairs) {
      if (a == x) {
        out.push_back(b);
      }
    }
    return out;
  }

  ObjectRelation induced_object_relation(RelationalFunctor const& phi) {
    ObjectRelation rel;
    for (auto const& a : phi.source().arrows()) {
      for (arrow_id f : phi.image(a.id)) {
        rel.pairs.emplace_back(a.dom, phi.target().dom(f));
        rel.pairs.emplace_back(a.cod, phi.target().cod(f));
      }
    }
    std::sort(rel.pairs.begin(), rel.pairs.end());
    rel.pairs.erase(std::unique(rel.pairs.begin(), rel.pairs.end()),
                    rel.pairs.end());
    return rel;
  }

  RelationalFunctor compose_functors(RelationalFunctor const& phi,
                                     RelationalFunctor const& tau) {
    if (phi.target_ptr() != tau.source_ptr()
        && !(phi.target() == tau.source())) {
      throw StructuralError(
          "cannot compose relational functors: target of the first is not the "
          "source of the second");
    }
    std::vector<ArrowSet> map;
    map.reserve(phi.source().number_of_arrows());
    for (auto const& img : phi.arrow_map()) {
      ArrowSet out;
      for (arrow_id f : img) {
        out.insert(tau.image(f));
      }
      map.push_back(std::move(out));
    }
    return RelationalFunctor(phi.source_ptr(), tau.target_ptr(), std::move(map));
  }

  std::vector<arrow_id> uncovered_arrows(RelationalFunctor const& phi) {
    std::vector<bool> hit(phi.target().number_of_arrows(), false);
    for (auto const& img : phi.arrow_map()) {
      for (arrow_id f : img) {
        hit[f] = true;
      }
    }
    std::vector<arrow_id> out;
    for (arrow_id f = 0; f < hit.size(); ++f) {
      if (!hit[f]) {
        out.push_back(f);
      }
    }
    return out;
  }

  std::vector<std::pair<arrow_id, arrow_id>>
  overlapping_images(RelationalFunctor const& phi) {
    // Bucket source arrows by target arrow; any bucket with two members is a
    // collision.
    std::vector<std::vector<arrow_id>> by_target(
        phi.target().number_of_arrows());
    for (arrow_id a = 0; a < phi.arrow_map().size(); ++a) {
      for (arrow_id f : phi.image(a)) {
        by_target[f].push_back(a);
      }
    }
    std::vector<std::pair<arrow_id, arrow_id>> out;
    for (auto const& bucket : by_target) {
      for (std::size_t i = 0; i < bucket.size(); ++i) {
        for (std::size_t j = i + 1; j < bucket.size(); ++j) {
          out.emplace_back(bucket[i], bucket[j]);
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Classification classify(RelationalFunctor const& phi) {
    return {uncovered_arrows(phi).empty(), overlapping_images(phi).empty()};
  }

  std::vector<ArrowSet> preimages(RelationalFunctor const& phi) {
    auto missing = uncovered_arrows(phi);
    if (!missing.empty()) {
      std::string names;
      for (arrow_id f : missing) {
        names += (names.empty() ? "" : ", ") + phi.target().arrow(f).label;
      }
      throw ValidationError("relational functor is not surjective; empty "
                            "preimage for: "
                            + names);
    }
    std::vector<std::vector<arrow_id>> pre(phi.target().number_of_arrows());
    for (arrow_id a = 0; a < phi.arrow_map().size(); ++a) {
      for (arrow_id f : phi.image(a)) {
        pre[f].push_back(a);
      }
    }
    std::vector<ArrowSet> out;
    out.reserve(pre.size());
    for (auto& p : pre) {
      out.emplace_back(std::move(p));
    }
    return out;
  }

  RelationalFunctor identity_functor(std::shared_ptr<Semigroupoid const> s) {
    std::vector<ArrowSet> map;
    for (arrow_id f = 0; f < s->number_of_arrows(); ++f) {
      map.push_back(ArrowSet{f});
    }
    return RelationalFunctor(s, s, std::move(map));
  }

  ValidationReport
  validate_relational_morphism_ts(RelationalMorphismTS const& m) {
    ValidationReport report;
    if (!m.source || !m.target) {
      report.add(ViolationKind::structural, "missing source or target");
      return report;
    }
    auto const& src = *m.source;
    auto const& tgt = *m.target;
    if (src.state_sets().size() != 1 || tgt.state_sets().size() != 1) {
      report.add(ViolationKind::structural,
                 "relational morphisms of transformation semigroups need "
                 "one-object source and target");
      return report;
    }
    std::size_t const n = src.state_set(0).states.size();
    std::size_t const m_states = tgt.state_set(0).states.size();
    if (m.state_rel.size() != n) {
      throw StructuralError("state relation has "
                            + std::to_string(m.state_rel.size())
                            + " rows but the source has "
                            + std::to_string(n) + " states");
    }
    if (m.arrow_rel.size() != src.number_of_arrows()) {
      throw StructuralError("arrow relation has "
                            + std::to_string(m.arrow_rel.size())
                            + " rows but the source has "
                            + std::to_string(src.number_of_arrows())
                            + " arrows");
    }
    for (auto const& row : m.state_rel) {
      for (state_id y : row) {
        if (y >= m_states) {
          throw StructuralError("state relation references dangling target "
                                "state "
                                + std::to_string(y));
        }
      }
    }
    for (auto const& row : m.arrow_rel) {
      for (arrow_id t : row) {
        if (t >= tgt.number_of_arrows()) {
          throw StructuralError("arrow relation references dangling target "
                                "arrow "
                                + std::to_string(t));
        }
      }
    }

    for (state_id x = 0; x < n; ++x) {
      if (m.state_rel[x].empty()) {
        report.add(ViolationKind::empty_image,
                   "state " + src.state_label(0, x) + " has an empty image",
                   {x});
      }
    }
    for (arrow_id s = 0; s < src.number_of_arrows(); ++s) {
      if (m.arrow_rel[s].empty()) {
        report.add(ViolationKind::empty_image,
                   "arrow " + src.arrows()[s].label + " has an empty image",
                   {s});
      }
    }
    for (state_id x = 0; x < n; ++x) {
      for (arrow_id s = 0; s < src.number_of_arrows(); ++s) {
        state_id    xs      = apply(src.transformation(s), x);
        auto const& allowed = m.state_rel[xs];
        for (state_id y : m.state_rel[x]) {
          for (arrow_id t : m.arrow_rel[s]) {
            state_id yt = apply(tgt.transformation(t), y);
            if (!std::binary_search(allowed.begin(), allowed.end(), yt)) {
              report.add(ViolationKind::incompatible_action,
                         "state " + src.state_label(0, x) + " under "
                             + src.arrows()[s].label + ": related "
                             + tgt.state_label(0, y) + " under "
                             + tgt.arrows()[t].label + " gives "
                             + tgt.state_label(0, yt)
                             + ", which is not related to "
                             + src.state_label(0, xs),
                         {x, s, y, t});
            }
          }
        }
      }
    }
    return report;
  }

}  // namespace sgpoid
