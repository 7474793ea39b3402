#include "sgpoid/semigroupoid.hpp"

#include <ostream>
#include <sstream>

#include "sgpoid/error.hpp"

namespace sgpoid {

  std::string to_string(ViolationKind kind) {
    switch (kind) {
      case ViolationKind::missing_composite:
        return "missing-composite";
      case ViolationKind::ill_typed_composite:
        return "ill-typed-composite";
      case ViolationKind::ill_typed_entry:
        return "ill-typed-entry";
      case ViolationKind::associativity:
        return "associativity";
      case ViolationKind::extensional_mismatch:
        return "extensional-mismatch";
      case ViolationKind::duplicate_function:
        return "duplicate-function";
      case ViolationKind::empty_image:
        return "empty-image";
      case ViolationKind::incompatible:
        return "incompatible";
      case ViolationKind::empty_composite:
        return "empty-composite";
      case ViolationKind::not_injective:
        return "not-injective";
      case ViolationKind::incompatible_action:
        return "incompatible-action";
      case ViolationKind::codec:
        return "codec";
      case ViolationKind::structural:
        return "structural";
    }
    return "unknown";
  }

  std::ostream& operator<<(std::ostream& os, ValidationReport const& report) {
    if (report.ok()) {
      return os << "valid\n";
    }
    for (auto const& v : report.violations()) {
      os << to_string(v.kind) << ": " << v.message << '\n';
    }
    return os;
  }

  Semigroupoid::Semigroupoid(std::vector<Object>           objects,
                             std::vector<Arrow>            arrows,
                             std::vector<CompositionEntry> entries)
      : _objects(std::move(objects)),
        _arrows(std::move(arrows)),
        _rows(_arrows.size()),
        _from(_objects.size()),
        _to(_objects.size()) {
    for (std::size_t i = 0; i < _objects.size(); ++i) {
      if (_objects[i].id != i) {
        throw StructuralError("object ids must be contiguous from 0, found id "
                              + std::to_string(_objects[i].id) + " at position "
                              + std::to_string(i));
      }
    }
    for (std::size_t i = 0; i < _arrows.size(); ++i) {
      auto const& a = _arrows[i];
      if (a.id != i) {
        throw StructuralError("arrow ids must be contiguous from 0, found id "
                              + std::to_string(a.id) + " at position "
                              + std::to_string(i));
      }
      if (a.dom >= _objects.size() || a.cod >= _objects.size()) {
        throw StructuralError(
            "arrow " + a.label + " references dangling object id "
            + std::to_string(a.dom >= _objects.size() ? a.dom : a.cod));
      }
      _from[a.dom].push_back(a.id);
      _to[a.cod].push_back(a.id);
    }
    for (auto const& e : entries) {
      for (arrow_id x : {e.left, e.right, e.result}) {
        if (x >= _arrows.size()) {
          throw StructuralError("composition entry references dangling arrow id "
                                + std::to_string(x));
        }
      }
      _rows[e.left].emplace_back(e.right, e.result);
    }
    for (std::size_t f = 0; f < _rows.size(); ++f) {
      auto& row = _rows[f];
      std::sort(row.begin(), row.end());
      for (std::size_t i = 1; i < row.size(); ++i) {
        if (row[i].first == row[i - 1].first) {
          throw StructuralError("duplicate composition entry for ("
                                + _arrows[f].label + ", "
                                + _arrows[row[i].first].label + ")");
        }
      }
      _number_of_entries += row.size();
    }
  }

  Object const& Semigroupoid::object(object_id x) const {
    if (x >= _objects.size()) {
      throw StructuralError("dangling object id " + std::to_string(x));
    }
    return _objects[x];
  }

  Arrow const& Semigroupoid::arrow(arrow_id f) const {
    if (f >= _arrows.size()) {
      throw StructuralError("dangling arrow id " + std::to_string(f));
    }
    return _arrows[f];
  }

  std::optional<arrow_id> Semigroupoid::entry(arrow_id f, arrow_id g) const {
    auto const& row = _rows[f];
    auto        it  = std::lower_bound(
        row.begin(), row.end(), std::pair<arrow_id, arrow_id>(g, 0));
    if (it == row.end() || it->first != g) {
      return std::nullopt;
    }
    return it->second;
  }

  std::vector<CompositionEntry> Semigroupoid::entries() const {
    std::vector<CompositionEntry> result;
    result.reserve(_number_of_entries);
    for (arrow_id f = 0; f < _rows.size(); ++f) {
      for (auto const& [g, h] : _rows[f]) {
        result.push_back({f, g, h});
      }
    }
    return result;
  }

  std::optional<arrow_id>
  Semigroupoid::find_arrow(std::string const& label) const {
    for (auto const& a : _arrows) {
      if (a.label == label) {
        return a.id;
      }
    }
    return std::nullopt;
  }

  std::optional<object_id>
  Semigroupoid::find_object(std::string const& label) const {
    for (auto const& x : _objects) {
      if (x.label == label) {
        return x.id;
      }
    }
    return std::nullopt;
  }

  std::string Semigroupoid::type_string(arrow_id f) const {
    auto const& a = arrow(f);
    return _objects[a.dom].label + "->" + _objects[a.cod].label;
  }

  bool operator==(Semigroupoid const& x, Semigroupoid const& y) {
    if (x._objects.size() != y._objects.size()
        || x._arrows.size() != y._arrows.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x._objects.size(); ++i) {
      if (x._objects[i].label != y._objects[i].label) {
        return false;
      }
    }
    for (std::size_t i = 0; i < x._arrows.size(); ++i) {
      auto const& a = x._arrows[i];
      auto const& b = y._arrows[i];
      if (a.dom != b.dom || a.cod != b.cod || a.label != b.label) {
        return false;
      }
    }
    return x._rows == y._rows;
  }

  arrow_id compose(Semigroupoid const& s, arrow_id f, arrow_id g) {
    auto const& a = s.arrow(f);
    auto const& b = s.arrow(g);
    if (a.cod != b.dom) {
      throw NotComposable("cannot compose " + a.label + ": " + s.type_string(f)
                              + " with " + b.label + ": " + s.type_string(g),
                          s.type_string(f),
                          s.type_string(g));
    }
    auto h = s.entry(f, g);
    if (!h) {
      throw StructuralError("composition table has no entry for (" + a.label
                            + ", " + b.label + ")");
    }
    return *h;
  }

  ArrowSet compose_sets(Semigroupoid const& s,
                        ArrowSet const&     p,
                        ArrowSet const&     q) {
    std::vector<arrow_id> out;
    for (arrow_id f : p) {
      for (arrow_id g : q) {
        if (auto h = s.try_compose(f, g)) {
          out.push_back(*h);
        }
      }
    }
    return ArrowSet(std::move(out));
  }

  ArrowSet hom_set(Semigroupoid const& s, object_id x, object_id y) {
    (void)s.object(x);
    (void)s.object(y);
    std::vector<arrow_id> out;
    for (arrow_id f : s.arrows_from(x)) {
      if (s.cod(f) == y) {
        out.push_back(f);
      }
    }
    return ArrowSet(std::move(out));
  }

  ValidationReport validate_semigroupoid(Semigroupoid const& s) {
    ValidationReport report;
    auto             label = [&s](arrow_id f) { return s.arrow(f).label; };

    for (auto const& e : s.entries()) {
      if (!s.composable(e.left, e.right)) {
        report.add(ViolationKind::ill_typed_entry,
                   "entry (" + label(e.left) + ", " + label(e.right)
                       + ") for non-composable pair " + s.type_string(e.left)
                       + ", " + s.type_string(e.right),
                   {e.left, e.right});
      }
    }

    // Closure and typing of composites.
    for (auto const& f : s.arrows()) {
      for (arrow_id g : s.arrows_from(f.cod)) {
        auto h = s.entry(f.id, g);
        if (!h) {
          report.add(ViolationKind::missing_composite,
                     "missing composite for composable pair (" + f.label + ", "
                         + label(g) + ")",
                     {f.id, g});
        } else if (s.dom(*h) != f.dom || s.cod(*h) != s.cod(g)) {
          report.add(ViolationKind::ill_typed_composite,
                     f.label + "." + label(g) + " = " + label(*h)
                         + " has type " + s.type_string(*h) + ", expected "
                         + s.object(f.dom).label + "->"
                         + s.object(s.cod(g)).label,
                     {f.id, g, *h});
        }
      }
    }

    // Associativity over every composable triple whose composites exist.
    for (auto const& f : s.arrows()) {
      for (arrow_id g : s.arrows_from(f.cod)) {
        auto fg = s.entry(f.id, g);
        if (!fg) {
          continue;
        }
        for (arrow_id h : s.arrows_from(s.cod(g))) {
          auto gh = s.entry(g, h);
          if (!gh) {
            continue;
          }
          auto left  = s.try_compose(*fg, h);
          auto right = s.try_compose(f.id, *gh);
          if (!left || !right) {
            continue;  // already reported as a typing/closure defect
          }
          if (*left != *right) {
            report.add(ViolationKind::associativity,
                       "(" + f.label + "." + label(g) + ")." + label(h) + " = "
                           + label(*left) + " but " + f.label + ".("
                           + label(g) + "." + label(h) + ") = " + label(*right),
                       {f.id, g, h});
          }
        }
      }
    }
    return report;
  }

  std::vector<object_id> supporting_objects(Semigroupoid const& s,
                                            ArrowSet const&     p) {
    std::vector<object_id> out;
    for (arrow_id f : p) {
      out.push_back(s.dom(f));
      out.push_back(s.cod(f));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Semigroupoid sub_semigroupoid(Semigroupoid const&    s,
                                ArrowSet const&        generators,
                                std::vector<arrow_id>* embedding) {
    // Breadth-first closure, then relabel in original id order.
    ArrowSet              closed = generators;
    std::vector<arrow_id> frontier(generators.begin(), generators.end());
    while (!frontier.empty()) {
      std::vector<arrow_id> next;
      for (arrow_id f : frontier) {
        for (arrow_id g : closed.ids()) {
          for (auto [x, y] : {std::pair{f, g}, std::pair{g, f}}) {
            if (auto h = s.try_compose(x, y); h && !closed.contains(*h)) {
              next.push_back(*h);
            }
          }
        }
      }
      ArrowSet fresh(next);
      closed.insert(fresh);
      frontier.assign(fresh.begin(), fresh.end());
    }

    std::vector<object_id> objs = supporting_objects(s, closed);
    std::vector<object_id> obj_index(s.number_of_objects(), 0);
    std::vector<Object>    objects;
    for (object_id x : objs) {
      obj_index[x] = static_cast<object_id>(objects.size());
      objects.push_back({obj_index[x], s.object(x).label});
    }
    std::vector<arrow_id> arr_index(s.number_of_arrows(), 0);
    std::vector<Arrow>    arrows;
    for (arrow_id f : closed) {
      arr_index[f] = static_cast<arrow_id>(arrows.size());
      auto const& a = s.arrow(f);
      arrows.push_back(
          {arr_index[f], obj_index[a.dom], obj_index[a.cod], a.label});
    }
    std::vector<CompositionEntry> entries;
    for (arrow_id f : closed) {
      for (arrow_id g : closed) {
        if (auto h = s.try_compose(f, g)) {
          entries.push_back({arr_index[f], arr_index[g], arr_index[*h]});
        }
      }
    }
    if (embedding != nullptr) {
      embedding->assign(closed.begin(), closed.end());
    }
    return Semigroupoid(std::move(objects), std::move(arrows), std::move(entries));
  }

}  // namespace sgpoid
