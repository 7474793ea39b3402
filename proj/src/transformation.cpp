#include "sgpoid/transformation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "sgpoid/error.hpp"

namespace sgpoid {

  ////////////////////////////////////////////////////////////////////////
  // Transformations
  ////////////////////////////////////////////////////////////////////////

  state_id apply(Transformation const& t, state_id x) {
    if (x >= t.images.size()) {
      throw DomainError("state index " + std::to_string(x)
                        + " is outside a domain of size "
                        + std::to_string(t.images.size()));
    }
    return t.images[x];
  }

  Transformation compose_transformations(Transformation const& t1,
                                         Transformation const& t2) {
    if (t1.cod != t2.dom) {
      auto type = [](Transformation const& t) {
        return std::to_string(t.dom) + "->" + std::to_string(t.cod);
      };
      throw NotComposable("cannot compose transformations of types " + type(t1)
                              + " and " + type(t2),
                          type(t1),
                          type(t2));
    }
    Transformation out{t1.dom, t2.cod, {}};
    out.images.reserve(t1.images.size());
    for (state_id y : t1.images) {
      out.images.push_back(apply(t2, y));
    }
    return out;
  }

  bool is_permutation(Transformation const& t) {
    if (t.dom != t.cod) {
      return false;
    }
    return image(t).size() == t.images.size();
  }

  std::vector<state_id> image(Transformation const& t) {
    std::vector<state_id> out = t.images;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // TransformationSemigroupoid
  ////////////////////////////////////////////////////////////////////////

  TransformationSemigroupoid::TransformationSemigroupoid(
      std::vector<StateSet>                        state_sets,
      std::vector<TypedArrow>                      arrows,
      std::optional<std::vector<CompositionEntry>> entries)
      : _state_sets(std::move(state_sets)), _arrows(std::move(arrows)) {
    for (auto const& ss : _state_sets) {
      if (ss.states.empty()) {
        throw StructuralError("state set " + ss.label + " is empty");
      }
    }
    for (arrow_id f = 0; f < _arrows.size(); ++f) {
      auto const& a = _arrows[f];
      auto const& t = a.map;
      if (t.dom >= _state_sets.size() || t.cod >= _state_sets.size()) {
        throw StructuralError(
            "arrow " + a.label + " references dangling object id "
            + std::to_string(t.dom >= _state_sets.size() ? t.dom : t.cod));
      }
      if (t.images.size() != _state_sets[t.dom].states.size()) {
        throw StructuralError(
            "arrow " + a.label + " has " + std::to_string(t.images.size())
            + " images but its domain " + _state_sets[t.dom].label + " has "
            + std::to_string(_state_sets[t.dom].states.size()) + " states");
      }
      for (state_id y : t.images) {
        if (y >= _state_sets[t.cod].states.size()) {
          throw StructuralError("arrow " + a.label + " maps to state index "
                                + std::to_string(y) + " outside its codomain "
                                + _state_sets[t.cod].label);
        }
      }
      _index.emplace(t, f);
    }

    std::vector<Object> objects;
    for (object_id x = 0; x < _state_sets.size(); ++x) {
      objects.push_back({x, _state_sets[x].label});
    }
    std::vector<Arrow> abstract_arrows;
    for (arrow_id f = 0; f < _arrows.size(); ++f) {
      abstract_arrows.push_back(
          {f, _arrows[f].map.dom, _arrows[f].map.cod, _arrows[f].label});
    }
    if (!entries) {
      entries.emplace();
      for (arrow_id f = 0; f < _arrows.size(); ++f) {
        for (arrow_id g = 0; g < _arrows.size(); ++g) {
          if (_arrows[f].map.cod != _arrows[g].map.dom) {
            continue;
          }
          auto h = find(compose_transformations(_arrows[f].map, _arrows[g].map));
          if (h) {
            entries->push_back({f, g, *h});
          }
        }
      }
    }
    _abstract = std::make_shared<Semigroupoid const>(
        std::move(objects), std::move(abstract_arrows), std::move(*entries));
  }

  std::optional<arrow_id>
  TransformationSemigroupoid::find(Transformation const& t) const {
    auto it = _index.find(t);
    if (it == _index.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t TransformationSemigroupoid::total_states() const {
    std::size_t n = 0;
    for (auto const& ss : _state_sets) {
      n += ss.states.size();
    }
    return n;
  }

  namespace {
    std::string map_string(TransformationSemigroupoid const& ts,
                           Transformation const&             t) {
      std::string out = "(";
      for (state_id x = 0; x < t.images.size(); ++x) {
        out += (x == 0 ? "" : " ") + ts.state_label(t.cod, t.images[x]);
      }
      return out + ")";
    }
  }  // namespace

  ValidationReport
  validate_transformation_semigroupoid(TransformationSemigroupoid const& ts) {
    ValidationReport report;
    auto const&      arrows = ts.arrows();

    for (arrow_id f = 0; f < arrows.size(); ++f) {
      auto first = ts.find(arrows[f].map);
      if (first && *first != f) {
        report.add(ViolationKind::duplicate_function,
                   "arrows " + arrows[*first].label + " and " + arrows[f].label
                       + " are the same function "
                       + map_string(ts, arrows[f].map),
                   {*first, f});
      }
    }

    Semigroupoid const& s = ts.abstract();
    for (arrow_id f = 0; f < arrows.size(); ++f) {
      for (arrow_id g : s.arrows_from(arrows[f].map.cod)) {
        auto composite = compose_transformations(arrows[f].map, arrows[g].map);
        auto h         = s.entry(f, g);
        if (!h) {
          if (!ts.find(composite)) {
            report.add(ViolationKind::missing_composite,
                       "not closed: " + arrows[f].label + "." + arrows[g].label
                           + " = " + map_string(ts, composite)
                           + " is not an arrow",
                       {f, g});
          }
          continue;
        }
        if (arrows[*h].map != composite) {
          report.add(ViolationKind::extensional_mismatch,
                     "table says " + arrows[f].label + "." + arrows[g].label
                         + " = " + arrows[*h].label + " "
                         + map_string(ts, arrows[*h].map)
                         + " but the functions compose to "
                         + map_string(ts, composite),
                     {f, g, *h});
        }
      }
    }
    report.append(validate_semigroupoid(s));
    return report;
  }

  TransformationSemigroupoid generate_closure(
      std::vector<StateSet>                                      state_sets,
      std::vector<TransformationSemigroupoid::TypedArrow> const& generators) {
    for (auto const& g : generators) {
      auto const& t = g.map;
      if (t.dom >= state_sets.size() || t.cod >= state_sets.size()
          || t.images.size() != state_sets[t.dom].states.size()
          || std::any_of(t.images.begin(), t.images.end(), [&](state_id y) {
               return y >= state_sets[t.cod].states.size();
             })) {
        throw StructuralError("generator " + g.label + " is ill typed");
      }
    }

    std::vector<TransformationSemigroupoid::TypedArrow> arrows;
    std::map<Transformation, arrow_id>                  seen;
    auto add = [&](std::string label, Transformation t) {
      if (seen.emplace(t, static_cast<arrow_id>(arrows.size())).second) {
        arrows.push_back({std::move(label), std::move(t)});
      }
    };
    for (auto const& g : generators) {
      add(g.label, g.map);
    }
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      for (auto const& g : generators) {
        if (arrows[i].map.cod != g.map.dom) {
          continue;
        }
        auto t = compose_transformations(arrows[i].map, g.map);
        if (!seen.contains(t)) {
          add(arrows[i].label + "." + g.label, std::move(t));
        }
      }
    }
    return TransformationSemigroupoid(std::move(state_sets), std::move(arrows));
  }

  namespace {
    void require_one_object(TransformationSemigroupoid const& ts,
                            char const*                       what) {
      if (ts.state_sets().size() != 1) {
        throw Unsupported(std::string(what)
                          + " needs a one-object transformation semigroupoid, "
                            "got "
                          + std::to_string(ts.state_sets().size())
                          + " objects");
      }
    }

    bool image_order(std::vector<state_id> const& a,
                     std::vector<state_id> const& b) {
      if (a.size() != b.size()) {
        return a.size() > b.size();
      }
      return a < b;
    }

    std::string subset_label(StateSet const&              ss,
                             std::vector<state_id> const& subset) {
      std::string out = "{";
      for (std::size_t i = 0; i < subset.size(); ++i) {
        out += (i == 0 ? "" : ",") + ss.states[subset[i]];
      }
      return out + "}";
    }

    std::vector<std::string> subset_states(StateSet const&              ss,
                                           std::vector<state_id> const& subset) {
      std::vector<std::string> out;
      for (state_id x : subset) {
        out.push_back(ss.states[x]);
      }
      return out;
    }

    // Position of x in the sorted subset, which must contain it.
    state_id position(std::vector<state_id> const& subset, state_id x) {
      auto it = std::lower_bound(subset.begin(), subset.end(), x);
      return static_cast<state_id>(it - subset.begin());
    }
  }  // namespace

  std::vector<std::vector<state_id>>
  image_sets(TransformationSemigroupoid const& ts) {
    require_one_object(ts, "image_sets");
    std::set<std::vector<state_id>> found;
    for (auto const& a : ts.arrows()) {
      found.insert(image(a.map));
    }
    std::vector<std::vector<state_id>> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), image_order);
    return out;
  }

  RelationalFunctor RelationalMorphismTS::arrow_functor() const {
    return RelationalFunctor(
        source->abstract_ptr(), target->abstract_ptr(), arrow_rel);
  }

  ////////////////////////////////////////////////////////////////////////
  // Image typing
  ////////////////////////////////////////////////////////////////////////

  ImageTyping image_typed_semigroupoid(TransformationSemigroupoid const& ts) {
    require_one_object(ts, "image_typed_semigroupoid");
    StateSet const& x = ts.state_set(0);

    std::vector<state_id> full(x.states.size());
    std::iota(full.begin(), full.end(), 0);
    std::vector<std::vector<state_id>> objects{full};
    for (auto& img : image_sets(ts)) {
      if (img != full) {
        objects.push_back(std::move(img));
      }
    }
    std::map<std::vector<state_id>, object_id> object_of;
    std::vector<StateSet>                      state_sets;
    for (object_id o = 0; o < objects.size(); ++o) {
      object_of.emplace(objects[o], o);
      state_sets.push_back(
          {subset_label(x, objects[o]), subset_states(x, objects[o])});
    }

    std::vector<TransformationSemigroupoid::TypedArrow> arrows;
    std::map<Transformation, arrow_id>                  seen;
    std::vector<ArrowSet>                               map;
    for (auto const& s : ts.arrows()) {
      ArrowSet restrictions;
      for (object_id o = 0; o < objects.size(); ++o) {
        std::vector<state_id> img;
        for (state_id y : objects[o]) {
          img.push_back(apply(s.map, y));
        }
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        object_id      cod = object_of.at(img);
        Transformation t{o, cod, {}};
        for (state_id y : objects[o]) {
          t.images.push_back(position(img, apply(s.map, y)));
        }
        auto [it, fresh] = seen.emplace(t, static_cast<arrow_id>(arrows.size()));
        if (fresh) {
          arrows.push_back({s.label + "|" + state_sets[o].label, std::move(t)});
        }
        restrictions.insert(it->second);
      }
      map.push_back(std::move(restrictions));
    }
    auto typed = std::make_shared<TransformationSemigroupoid const>(
        std::move(state_sets), std::move(arrows));
    RelationalFunctor functor(ts.abstract_ptr(), typed->abstract_ptr(),
                              std::move(map));
    return {std::move(typed), std::move(functor)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Pinhole typing
  ////////////////////////////////////////////////////////////////////////

  PinholeTyping pinhole_typed_semigroupoid(RelationalMorphismTS const& m) {
    auto report = validate_relational_morphism_ts(m);
    if (!report.ok()) {
      std::ostringstream os;
      os << "invalid relational morphism:\n" << report;
      throw ValidationError(os.str());
    }
    auto const& src = *m.source;
    auto const& tgt = *m.target;
    StateSet const& xs = src.state_set(0);
    StateSet const& ys = tgt.state_set(0);
    auto const&     tgt_abstract = tgt.abstract();

    // pre(y) for every target state; objects only for non-empty ones.
    std::vector<std::vector<state_id>> pre(ys.states.size());
    for (state_id x = 0; x < m.state_rel.size(); ++x) {
      for (state_id y : m.state_rel[x]) {
        pre[y].push_back(x);
      }
    }
    PinholeTyping          out;
    std::vector<object_id> object_of(ys.states.size(), 0);
    std::vector<StateSet>  state_sets;
    for (state_id y = 0; y < ys.states.size(); ++y) {
      if (pre[y].empty()) {
        continue;
      }
      object_of[y] = static_cast<object_id>(out.pinholes.size());
      out.pinholes.push_back(y);
      state_sets.push_back({"pre(" + ys.states[y] + ")", subset_states(xs, pre[y])});
    }

    using Key = std::tuple<object_id, object_id, std::vector<state_id>>;
    std::vector<TransformationSemigroupoid::TypedArrow> arrows;
    std::vector<ArrowSet>                               psi;
    std::map<Key, arrow_id>                             seen;
    std::set<std::string>                               labels;
    auto add = [&](Transformation t, std::string label) -> arrow_id {
      Key key{t.dom, t.cod, t.images};
      auto [it, fresh] = seen.emplace(key, static_cast<arrow_id>(arrows.size()));
      if (fresh) {
        while (!labels.insert(label).second) {
          label += "'";
        }
        arrows.push_back({std::move(label), std::move(t)});
        psi.emplace_back();
      }
      return it->second;
    };

    for (arrow_id s = 0; s < src.number_of_arrows(); ++s) {
      for (object_id o = 0; o < out.pinholes.size(); ++o) {
        state_id y = out.pinholes[o];
        for (arrow_id t : m.arrow_rel[s]) {
          state_id       y2 = apply(tgt.transformation(t), y);
          Transformation r{o, object_of[y2], {}};
          for (state_id x : pre[y]) {
            // Compatibility puts x.s in pre(y.t).
            r.images.push_back(position(pre[y2], apply(src.transformation(s), x)));
          }
          arrow_id a = add(std::move(r), src.arrows()[s].label + "@" + ys.states[y]);
          psi[a].insert(t);
          out.restriction_index.emplace(std::tuple{s, t, o}, a);
        }
      }
    }

    // Close under composition; a composite is projected to every product of
    // the projections of its factors, so the projection stays compatible.
    bool changed = true;
    while (changed) {
      changed = false;
      for (arrow_id i = 0; i < arrows.size(); ++i) {
        for (arrow_id j = 0; j < arrows.size(); ++j) {
          if (arrows[i].map.cod != arrows[j].map.dom) {
            continue;
          }
          auto   t = compose_transformations(arrows[i].map, arrows[j].map);
          auto   label = arrows[i].label + "." + arrows[j].label;
          arrow_id k     = add(std::move(t), std::move(label));
          ArrowSet prod  = compose_sets(tgt_abstract, psi[i], psi[j]);
          if (!prod.is_subset_of(psi[k])) {
            psi[k].insert(prod);
            changed = true;
          }
        }
      }
    }

    auto typed = std::make_shared<TransformationSemigroupoid const>(
        std::move(state_sets), std::move(arrows));
    out.projection
        = RelationalFunctor(typed->abstract_ptr(), tgt.abstract_ptr(), std::move(psi));

    // s is related to every typed arrow that acts as s on its domain.
    std::vector<ArrowSet> restriction(src.number_of_arrows());
    for (arrow_id s = 0; s < src.number_of_arrows(); ++s) {
      for (arrow_id a = 0; a < typed->number_of_arrows(); ++a) {
        auto const& r   = typed->transformation(a);
        auto const& dom = pre[out.pinholes[r.dom]];
        auto const& cod = pre[out.pinholes[r.cod]];
        bool        acts = true;
        for (state_id i = 0; i < dom.size() && acts; ++i) {
          acts = cod[r.images[i]] == apply(src.transformation(s), dom[i]);
        }
        if (acts) {
          restriction[s].insert(a);
        }
      }
    }
    out.restriction = RelationalFunctor(
        src.abstract_ptr(), typed->abstract_ptr(), std::move(restriction));
    out.typed = std::move(typed);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Holonomy seed
  ////////////////////////////////////////////////////////////////////////

  RelationalMorphismTS
  holonomy_seed_morphism(std::shared_ptr<TransformationSemigroupoid const> ts) {
    require_one_object(*ts, "holonomy_seed_morphism");
    StateSet const& x = ts->state_set(0);
    auto const      n = static_cast<state_id>(x.states.size());
    if (n == 1) {
      throw DegenerateError("the seed morphism needs at least 2 states; "
                            "x -> X\\{x} would be empty");
    }

    auto constant = [n](state_id z) {
      return Transformation{0, 0, std::vector<state_id>(n, z)};
    };
    std::vector<TransformationSemigroupoid::TypedArrow> generators;
    std::set<Transformation>                            used;
    std::vector<std::vector<Transformation>>            images;
    for (auto const& s : ts->arrows()) {
      std::vector<Transformation> img;
      if (is_permutation(s.map)) {
        img.push_back(s.map);
        if (used.insert(s.map).second) {
          generators.push_back({s.label, s.map});
        }
      } else {
        auto im = image(s.map);
        for (state_id z = 0; z < n; ++z) {
          if (std::binary_search(im.begin(), im.end(), z)) {
            continue;
          }
          img.push_back(constant(z));
          if (used.insert(constant(z)).second) {
            generators.push_back({"c_" + x.states[z], constant(z)});
          }
        }
      }
      images.push_back(std::move(img));
    }

    RelationalMorphismTS m;
    m.source = ts;
    m.target = std::make_shared<TransformationSemigroupoid const>(
        generate_closure({x}, generators));
    for (state_id z = 0; z < n; ++z) {
      std::vector<state_id> others;
      for (state_id w = 0; w < n; ++w) {
        if (w != z) {
          others.push_back(w);
        }
      }
      m.state_rel.push_back(std::move(others));
    }
    for (auto const& img : images) {
      ArrowSet rel;
      for (auto const& t : img) {
        rel.insert(*m.target->find(t));
      }
      m.arrow_rel.push_back(std::move(rel));
    }
    return m;
  }

  ////////////////////////////////////////////////////////////////////////
  // Diagnostics
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // The states of all objects side by side, labels qualified by the object
    // label only where two objects share a state label.
    StateSet disjoint_union(TransformationSemigroupoid const& ts,
                            std::vector<state_id>&            offset) {
      std::map<std::string, std::size_t> count;
      for (auto const& ss : ts.state_sets()) {
        for (auto const& st : ss.states) {
          ++count[st];
        }
      }
      StateSet out{"", {}};
      for (auto const& ss : ts.state_sets()) {
        offset.push_back(static_cast<state_id>(out.states.size()));
        out.label += (out.label.empty() ? "" : "+") + ss.label;
        for (auto const& st : ss.states) {
          out.states.push_back(count[st] > 1 ? st + "_" + ss.label : st);
        }
      }
      return out;
    }

    Completion complete(TransformationSemigroupoid const& ts,
                        StateSet                          states,
                        std::vector<TransformationSemigroupoid::TypedArrow> lifted,
                        bool with_orbit) {
      Completion c;
      c.report.original_arrow_count = ts.number_of_arrows();
      c.report.state_count          = states.states.size();
      std::set<Transformation> originals;
      for (auto const& a : lifted) {
        originals.insert(a.map);
      }
      c.semigroup = generate_closure({states}, lifted);
      c.report.completed_arrow_count = c.semigroup.number_of_arrows();
      for (auto const& a : c.semigroup.arrows()) {
        if (!originals.contains(a.map)) {
          c.report.new_elements.push_back(a.map);
        }
      }
      if (!with_orbit) {
        return c;
      }
      std::size_t best = 0;
      for (auto const& a : lifted) {
        for (auto const& b : lifted) {
          auto p = compose_transformations(a.map, b.map);
          if (originals.contains(p)) {
            continue;
          }
          std::vector<Transformation> orbit{p};
          std::set<Transformation>    in_orbit{p};
          for (auto q = compose_transformations(p, p); in_orbit.insert(q).second;
               q = compose_transformations(q, p)) {
            orbit.push_back(q);
          }
          if (orbit.size() > best) {
            best = orbit.size();
            c.report.orbit_witness
                = OrbitWitness{a.label + "." + b.label, p, std::move(orbit)};
          }
        }
      }
      return c;
    }
  }  // namespace

  Completion pad_with_identities(TransformationSemigroupoid const& ts) {
    std::vector<state_id> offset;
    StateSet              states = disjoint_union(ts, offset);
    auto const            n      = static_cast<state_id>(states.states.size());

    std::vector<TransformationSemigroupoid::TypedArrow> lifted;
    for (auto const& a : ts.arrows()) {
      Transformation t{0, 0, std::vector<state_id>(n)};
      std::iota(t.images.begin(), t.images.end(), 0);
      for (state_id x = 0; x < a.map.images.size(); ++x) {
        t.images[offset[a.map.dom] + x] = offset[a.map.cod] + a.map.images[x];
      }
      lifted.push_back({a.label, std::move(t)});
    }
    return complete(ts, std::move(states), std::move(lifted), true);
  }

  Completion sink_completion(TransformationSemigroupoid const& ts) {
    std::vector<state_id> offset;
    StateSet              states = disjoint_union(ts, offset);
    auto const            sink   = static_cast<state_id>(states.states.size());
    states.states.push_back("_");
    auto const n = sink + 1;

    std::vector<TransformationSemigroupoid::TypedArrow> lifted;
    for (auto const& a : ts.arrows()) {
      Transformation t{0, 0, std::vector<state_id>(n, sink)};
      for (state_id x = 0; x < a.map.images.size(); ++x) {
        t.images[offset[a.map.dom] + x] = offset[a.map.cod] + a.map.images[x];
      }
      lifted.push_back({a.label, std::move(t)});
    }
    Transformation const all_sink{0, 0, std::vector<state_id>(n, sink)};
    std::size_t          absorbed = 0;
    for (auto const& a : lifted) {
      for (auto const& b : lifted) {
        absorbed += compose_transformations(a.map, b.map) == all_sink;
      }
    }
    auto c                 = complete(ts, std::move(states), std::move(lifted), false);
    c.report.sink_absorbed = absorbed;
    return c;
  }

  TransformationSemigroupoid full_transformation_semigroup(std::size_t n) {
    if (n == 0) {
      throw DegenerateError("T_0 has no states");
    }
    StateSet x{"X", {}};
    for (std::size_t i = 0; i < n; ++i) {
      x.states.push_back(std::to_string(i));
    }
    auto const                                          k = static_cast<state_id>(n);
    std::vector<TransformationSemigroupoid::TypedArrow> generators;
    Transformation                                      swap{0, 0, {}};
    Transformation                                      cycle{0, 0, {}};
    Transformation                                      collapse{0, 0, {}};
    for (state_id i = 0; i < k; ++i) {
      swap.images.push_back(i == 0 ? (k > 1 ? 1 : 0) : (i == 1 ? 0 : i));
      cycle.images.push_back((i + 1) % k);
      collapse.images.push_back(i == k - 1 ? 0 : i);
    }
    generators.push_back({"t", swap});
    if (cycle != swap) {
      generators.push_back({"c", cycle});
    }
    generators.push_back({"e", collapse});
    return generate_closure({x}, generators);
  }

}  // namespace sgpoid
