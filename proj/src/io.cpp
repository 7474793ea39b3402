#include "sgpoid/io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sgpoid {

  namespace {
    using json = nlohmann::ordered_json;

    std::vector<std::string> tokens(std::string line) {
      if (auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      std::istringstream       in(line);
      std::vector<std::string> out;
      for (std::string tok; in >> tok;) {
        out.push_back(tok);
      }
      return out;
    }

    // Splits on commas outside brackets.
    std::vector<std::string> split_list(std::string const& s) {
      std::vector<std::string> out;
      std::string              cur;
      int                      depth = 0;
      for (char c : s) {
        if (c == '(' || c == '{' || c == '[') {
          ++depth;
        } else if (c == ')' || c == '}' || c == ']') {
          --depth;
        }
        if (c == ',' && depth == 0) {
          out.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      out.push_back(cur);
      return out;
    }

    std::string where(std::string const& name, std::size_t line) {
      return name + ":" + std::to_string(line) + ": ";
    }

    std::string dot_quote(std::string const& s) {
      std::string out = "\"";
      for (char c : s) {
        if (c == '"' || c == '\\') {
          out += '\\';
        }
        out += c;
      }
      return out + "\"";
    }

    std::string join(std::vector<std::string> const& xs, std::string const& sep) {
      std::string out;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out += (i == 0 ? "" : sep) + xs[i];
      }
      return out;
    }

    std::string set_labels(Semigroupoid const& s, ArrowSet const& p) {
      std::vector<std::string> xs;
      for (arrow_id a : p) {
        xs.push_back(s.arrow(a).label);
      }
      return "{" + join(xs, ", ") + "}";
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Semigroupoid files
  ////////////////////////////////////////////////////////////////////////

  bool SgdDocument::is_concrete() const {
    return std::all_of(objects.begin(), objects.end(),
                       [](auto const& o) { return !o.states.empty(); })
           && std::all_of(arrows.begin(), arrows.end(),
                          [](auto const& a) { return a.images.has_value(); });
  }

  SgdDocument parse_sgd(std::istream& in, std::string const& name) {
    SgdDocument doc;
    doc.name = name;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      auto tok = tokens(line);
      if (tok.empty()) {
        continue;
      }
      if (tok[0] == "object") {
        if (tok.size() < 2) {
          throw ParseError(name, n, "expected: object <label> [states...]");
        }
        doc.objects.push_back({tok[1], {tok.begin() + 2, tok.end()}, n});
      } else if (tok[0] == "arrow") {
        if (tok.size() < 5 || tok[3] != "->") {
          throw ParseError(name, n,
                           "expected: arrow <label> <dom> -> <cod> [: images...]");
        }
        SgdDocument::ArrowDecl a{tok[1], tok[2], tok[4], std::nullopt, n};
        if (tok.size() > 5) {
          if (tok[5] != ":" || tok.size() == 6) {
            throw ParseError(name, n, "expected ': images...' after the type");
          }
          a.images.emplace(tok.begin() + 6, tok.end());
        }
        doc.arrows.push_back(std::move(a));
      } else if (tok[0] == "compose") {
        if (tok.size() != 5 || tok[3] != "=") {
          throw ParseError(name, n, "expected: compose <f> <g> = <fg>");
        }
        doc.entries.push_back({tok[1], tok[2], tok[4], n});
      } else {
        throw ParseError(name, n, "unknown keyword \"" + tok[0] + "\"");
      }
    }
    return doc;
  }

  SgdDocument read_sgd(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in) {
      throw ParseError(path.string(), 0, "cannot read file");
    }
    return parse_sgd(in, path.string());
  }

  namespace {
    struct Resolved {
      std::vector<Object>              objects;
      std::vector<Arrow>               arrows;
      std::map<std::string, object_id> object_index;
      std::map<std::string, arrow_id>  arrow_index;
    };

    Resolved resolve(SgdDocument const& doc) {
      Resolved r;
      for (auto const& o : doc.objects) {
        auto id = static_cast<object_id>(r.objects.size());
        if (!r.object_index.emplace(o.label, id).second) {
          throw StructuralError(where(doc.name, o.line) + "object " + o.label
                                + " declared twice");
        }
        r.objects.push_back({id, o.label});
      }
      for (auto const& a : doc.arrows) {
        auto id = static_cast<arrow_id>(r.arrows.size());
        if (!r.arrow_index.emplace(a.label, id).second) {
          throw StructuralError(where(doc.name, a.line) + "arrow " + a.label
                                + " declared twice");
        }
        for (auto const& x : {a.dom, a.cod}) {
          if (!r.object_index.contains(x)) {
            throw StructuralError(where(doc.name, a.line) + "arrow " + a.label
                                  + " references undeclared object " + x);
          }
        }
        r.arrows.push_back(
            {id, r.object_index.at(a.dom), r.object_index.at(a.cod), a.label});
      }
      return r;
    }

    std::vector<CompositionEntry> resolve_entries(SgdDocument const& doc,
                                                  Resolved const&    r) {
      std::vector<CompositionEntry> entries;
      for (auto const& e : doc.entries) {
        std::vector<arrow_id> ids;
        for (auto const& x : {e.left, e.right, e.result}) {
          auto it = r.arrow_index.find(x);
          if (it == r.arrow_index.end()) {
            throw StructuralError(where(doc.name, e.line)
                                  + "compose references undeclared arrow " + x);
          }
          ids.push_back(it->second);
        }
        entries.push_back({ids[0], ids[1], ids[2]});
      }
      return entries;
    }
  }  // namespace

  Semigroupoid to_semigroupoid(SgdDocument const& doc) {
    if (doc.entries.empty() && doc.is_concrete() && !doc.arrows.empty()) {
      return to_transformation(doc).abstract();
    }
    auto r       = resolve(doc);
    auto entries = resolve_entries(doc, r);
    try {
      return Semigroupoid(std::move(r.objects), std::move(r.arrows), std::move(entries));
    } catch (StructuralError const& e) {
      throw StructuralError(doc.name + ": " + e.what());
    }
  }

  TransformationSemigroupoid to_transformation(SgdDocument const& doc) {
    if (!doc.is_concrete()) {
      throw StructuralError(doc.name
                            + ": not a transformation semigroupoid (objects "
                              "need states and arrows need mappings)");
    }
    auto                  r = resolve(doc);
    std::vector<StateSet> state_sets;
    for (auto const& o : doc.objects) {
      std::set<std::string> distinct(o.states.begin(), o.states.end());
      if (distinct.size() != o.states.size()) {
        throw StructuralError(where(doc.name, o.line) + "object " + o.label
                              + " repeats a state label");
      }
      state_sets.push_back({o.label, o.states});
    }
    std::vector<TransformationSemigroupoid::TypedArrow> arrows;
    for (std::size_t i = 0; i < doc.arrows.size(); ++i) {
      auto const&    a   = doc.arrows[i];
      auto const&    dom = state_sets[r.arrows[i].dom];
      auto const&    cod = state_sets[r.arrows[i].cod];
      Transformation t{r.arrows[i].dom, r.arrows[i].cod, {}};
      if (a.images->size() != dom.states.size()) {
        throw StructuralError(where(doc.name, a.line) + "arrow " + a.label
                              + " lists " + std::to_string(a.images->size())
                              + " images but " + dom.label + " has "
                              + std::to_string(dom.states.size()) + " states");
      }
      for (auto const& y : *a.images) {
        auto it = std::find(cod.states.begin(), cod.states.end(), y);
        if (it == cod.states.end()) {
          throw StructuralError(where(doc.name, a.line) + "arrow " + a.label
                                + " maps to " + y + ", not a state of "
                                + cod.label);
        }
        t.images.push_back(static_cast<state_id>(it - cod.states.begin()));
      }
      arrows.push_back({a.label, std::move(t)});
    }
    std::optional<std::vector<CompositionEntry>> entries;
    if (!doc.entries.empty()) {
      entries = resolve_entries(doc, r);
    }
    try {
      return TransformationSemigroupoid(
          std::move(state_sets), std::move(arrows), std::move(entries));
    } catch (StructuralError const& e) {
      throw StructuralError(doc.name + ": " + e.what());
    }
  }

  std::string emit_sgd(Semigroupoid const& s) {
    std::ostringstream os;
    for (auto const& o : s.objects()) {
      os << "object " << o.label << '\n';
    }
    for (auto const& a : s.arrows()) {
      os << "arrow " << a.label << ' ' << s.object(a.dom).label << " -> "
         << s.object(a.cod).label << '\n';
    }
    for (auto const& e : s.entries()) {
      os << "compose " << s.arrow(e.left).label << ' ' << s.arrow(e.right).label
         << " = " << s.arrow(e.result).label << '\n';
    }
    return os.str();
  }

  std::string emit_sgd(TransformationSemigroupoid const& ts) {
    std::ostringstream os;
    for (auto const& ss : ts.state_sets()) {
      os << "object " << ss.label;
      for (auto const& st : ss.states) {
        os << ' ' << st;
      }
      os << '\n';
    }
    for (auto const& a : ts.arrows()) {
      os << "arrow " << a.label << ' ' << ts.state_set(a.map.dom).label << " -> "
         << ts.state_set(a.map.cod).label << " :";
      for (state_id y : a.map.images) {
        os << ' ' << ts.state_label(a.map.cod, y);
      }
      os << '\n';
    }
    return os.str();
  }

  bool same_transformation_semigroupoid(TransformationSemigroupoid const& x,
                                        TransformationSemigroupoid const& y) {
    if (x.state_sets().size() != y.state_sets().size()
        || x.number_of_arrows() != y.number_of_arrows()) {
      return false;
    }
    for (std::size_t i = 0; i < x.state_sets().size(); ++i) {
      if (x.state_sets()[i].label != y.state_sets()[i].label
          || x.state_sets()[i].states != y.state_sets()[i].states) {
        return false;
      }
    }
    for (std::size_t i = 0; i < x.number_of_arrows(); ++i) {
      if (x.arrows()[i].label != y.arrows()[i].label
          || x.arrows()[i].map != y.arrows()[i].map) {
        return false;
      }
    }
    return x.abstract() == y.abstract();
  }

  ////////////////////////////////////////////////////////////////////////
  // Functor files
  ////////////////////////////////////////////////////////////////////////

  FunctorDocument parse_functor(std::istream&                in,
                                std::string const&           name,
                                std::filesystem::path const& base) {
    FunctorDocument doc;
    doc.name = name;
    bool        have_source = false, have_target = false;
    std::string line;
    std::size_t n = 1;
    for (; std::getline(in, line); ++n) {
      auto tok = tokens(line);
      if (tok.empty()) {
        continue;
      }
      if (tok[0] == "source" || tok[0] == "target") {
        if (tok.size() != 2) {
          throw ParseError(name, n, "expected: " + tok[0] + " <path>");
        }
        (tok[0] == "source" ? doc.source : doc.target) = base / tok[1];
        (tok[0] == "source" ? have_source : have_target) = true;
      } else if (tok[0] == "map" || tok[0] == "staterel") {
        if (tok.size() < 4 || tok[2] != "->") {
          throw ParseError(name, n, "expected: " + tok[0] + " <x> -> <y>[, <y>...]");
        }
        std::string rest;
        for (std::size_t i = 3; i < tok.size(); ++i) {
          rest += tok[i];
        }
        FunctorDocument::MapDecl m{tok[1], split_list(rest), n};
        if (std::any_of(m.to.begin(), m.to.end(),
                        [](auto const& x) { return x.empty(); })) {
          throw ParseError(name, n, "empty entry in list");
        }
        (tok[0] == "map" ? doc.maps : doc.staterels).push_back(std::move(m));
      } else {
        throw ParseError(name, n, "unknown keyword \"" + tok[0] + "\"");
      }
    }
    if (!have_source || !have_target) {
      throw ParseError(name, n, "missing source or target line");
    }
    return doc;
  }

  FunctorDocument read_functor(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in) {
      throw ParseError(path.string(), 0, "cannot read file");
    }
    return parse_functor(in, path.string(), path.parent_path());
  }

  namespace {
    template <typename Lookup>
    std::vector<std::vector<std::uint32_t>>
    resolve_maps(FunctorDocument const&                      doc,
                 std::vector<FunctorDocument::MapDecl> const& maps,
                 std::size_t                                 rows,
                 Lookup&&                                    from,
                 Lookup&&                                    to) {
      std::vector<std::vector<std::uint32_t>> out(rows);
      for (auto const& m : maps) {
        auto x = from(m.from);
        if (!x) {
          throw StructuralError(where(doc.name, m.line) + "unknown source label "
                                + m.from);
        }
        for (auto const& y : m.to) {
          auto z = to(y);
          if (!z) {
            throw StructuralError(where(doc.name, m.line)
                                  + "unknown target label " + y);
          }
          out[*x].push_back(*z);
        }
      }
      for (auto& row : out) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
      }
      return out;
    }
  }  // namespace

  LoadedFunctor load_functor(FunctorDocument const& doc) {
    auto src_doc = read_sgd(doc.source);
    auto tgt_doc = read_sgd(doc.target);
    using Finder = std::function<std::optional<std::uint32_t>(std::string const&)>;

    if (!doc.staterels.empty()) {
      auto src = std::make_shared<TransformationSemigroupoid const>(
          to_transformation(src_doc));
      auto tgt = std::make_shared<TransformationSemigroupoid const>(
          to_transformation(tgt_doc));
      if (src->state_sets().size() != 1 || tgt->state_sets().size() != 1) {
        throw StructuralError(doc.name
                              + ": staterel needs one-object source and target");
      }
      auto state_finder = [](TransformationSemigroupoid const& ts) -> Finder {
        return [&ts](std::string const& x) -> std::optional<std::uint32_t> {
          auto const& st = ts.state_set(0).states;
          auto        it = std::find(st.begin(), st.end(), x);
          if (it == st.end()) {
            return std::nullopt;
          }
          return static_cast<std::uint32_t>(it - st.begin());
        };
      };
      auto arrow_finder = [](Semigroupoid const& s) -> Finder {
        return [&s](std::string const& x) { return s.find_arrow(x); };
      };
      RelationalMorphismTS m;
      m.source    = src;
      m.target    = tgt;
      m.state_rel = resolve_maps(doc, doc.staterels, src->state_set(0).states.size(),
                                 state_finder(*src), state_finder(*tgt));
      for (auto& row : resolve_maps(doc, doc.maps, src->number_of_arrows(),
                                    arrow_finder(src->abstract()),
                                    arrow_finder(tgt->abstract()))) {
        m.arrow_rel.emplace_back(std::move(row));
      }
      return m;
    }
    auto src = std::make_shared<Semigroupoid const>(to_semigroupoid(src_doc));
    auto tgt = std::make_shared<Semigroupoid const>(to_semigroupoid(tgt_doc));
    Finder from = [&](std::string const& x) { return src->find_arrow(x); };
    Finder to   = [&](std::string const& x) { return tgt->find_arrow(x); };
    std::vector<ArrowSet> map;
    for (auto& row : resolve_maps(doc, doc.maps, src->number_of_arrows(),
                                  std::move(from), std::move(to))) {
      map.emplace_back(std::move(row));
    }
    return RelationalFunctor(src, tgt, std::move(map));
  }

  RelationalFunctor as_functor(LoadedFunctor const& f) {
    if (auto const* m = std::get_if<RelationalMorphismTS>(&f)) {
      return m->arrow_functor();
    }
    return std::get<RelationalFunctor>(f);
  }

  std::string emit_functor(RelationalFunctor const& phi,
                           std::string const&       source_path,
                           std::string const&       target_path) {
    std::ostringstream os;
    os << "source " << source_path << '\n' << "target " << target_path << '\n';
    for (auto const& a : phi.source().arrows()) {
      std::vector<std::string> xs;
      for (arrow_id f : phi.image(a.id)) {
        xs.push_back(phi.target().arrow(f).label);
      }
      os << "map " << a.label << " -> " << join(xs, ", ") << '\n';
    }
    return os.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // JSON
  ////////////////////////////////////////////////////////////////////////

  namespace {
    json semigroupoid_json(Semigroupoid const& s) {
      json j;
      j["objects"] = json::array();
      for (auto const& o : s.objects()) {
        j["objects"].push_back(o.label);
      }
      j["arrows"] = json::array();
      for (auto const& a : s.arrows()) {
        j["arrows"].push_back({{"label", a.label},
                               {"dom", s.object(a.dom).label},
                               {"cod", s.object(a.cod).label}});
      }
      j["table"] = json::array();
      for (auto const& e : s.entries()) {
        j["table"].push_back({s.arrow(e.left).label, s.arrow(e.right).label,
                              s.arrow(e.result).label});
      }
      return j;
    }

    json report_json(ValidationReport const& r) {
      json j;
      j["valid"]      = r.ok();
      j["violations"] = json::array();
      for (auto const& v : r.violations()) {
        j["violations"].push_back(
            {{"kind", to_string(v.kind)}, {"message", v.message}, {"witness", v.witness}});
      }
      return j;
    }

    json transformation_json(TransformationSemigroupoid const& ts,
                             Transformation const&             t) {
      json j = json::array();
      for (state_id y : t.images) {
        j.push_back(ts.state_label(t.cod, y));
      }
      return j;
    }
  }  // namespace

  std::string to_json(Semigroupoid const& s) {
    return semigroupoid_json(s).dump(2) + "\n";
  }

  std::string to_json(TransformationSemigroupoid const& ts) {
    json j;
    j["objects"] = json::array();
    for (auto const& ss : ts.state_sets()) {
      j["objects"].push_back({{"label", ss.label}, {"states", ss.states}});
    }
    j["arrows"] = json::array();
    for (auto const& a : ts.arrows()) {
      j["arrows"].push_back({{"label", a.label},
                             {"dom", ts.state_set(a.map.dom).label},
                             {"cod", ts.state_set(a.map.cod).label},
                             {"images", transformation_json(ts, a.map)}});
    }
    j["table"] = semigroupoid_json(ts.abstract())["table"];
    return j.dump(2) + "\n";
  }

  std::string to_json(ValidationReport const& r) {
    return report_json(r).dump(2) + "\n";
  }

  std::string to_json(Decomposition const& d) {
    auto const& top   = d.phi.target();
    auto const& src   = d.phi.source();
    auto const& host  = *d.kernel.codec.host;
    json        j;
    j["strategy"] = to_string(d.kernel.strategy);
    j["top_arrows"] = top.number_of_arrows();
    json classes  = json::array();
    for (auto const& k : d.kernel.classes) {
      json tops = json::array();
      for (arrow_id f : k.tops) {
        tops.push_back(top.arrow(f).label);
      }
      json arrows = json::array();
      for (arrow_id h : k.arrows) {
        arrows.push_back(host.arrow(h).label);
      }
      classes.push_back({{"tops", tops},
                         {"representative", top.arrow(k.representative).label},
                         {"arrows", arrows}});
    }
    j["kernel"]["classes"]     = classes;
    j["kernel"]["arrow_count"] = d.kernel.arrow_count();
    if (auto n = d.kernel.state_count()) {
      j["kernel"]["state_count"] = *n;
    }
    j["kernel"]["notes"] = d.kernel.notes;
    json codec           = json::array();
    for (auto const& tc : d.kernel.codec.tops) {
      json enc = json::array();
      for (auto [a, h] : tc.table) {
        enc.push_back({src.arrow(a).label, host.arrow(h).label});
      }
      codec.push_back({{"top", top.arrow(tc.top).label}, {"class", tc.klass}, {"enc", enc}});
    }
    j["codec"]   = codec;
    j["cascade"] = semigroupoid_json(*d.cascade.cascade.product);
    json rules   = json::array();
    for (auto const& cell : d.rules) {
      json entries = json::array();
      for (auto [a, b, r] : cell.entries) {
        entries.push_back({host.arrow(a).label, host.arrow(b).label, host.arrow(r).label});
      }
      json c = {{"left", top.arrow(cell.top_left).label},
                {"right", top.arrow(cell.top_right).label},
                {"result", top.arrow(cell.top_result).label},
                {"entries", entries}};
      c["carry"] = cell.carry ? json(host.arrow(*cell.carry).label) : json(nullptr);
      rules.push_back(c);
    }
    j["rules"]                       = rules;
    j["tracing_product_arrows"]      = d.tracing.product.pairs.size();
    j["tracing_certificate"]         = report_json(d.tracing.certificate.report);
    j["cascade_equals_tracing"]      = d.reverts_to_tracing_product();
    j["compressed"]                  = d.compressed();
    j["certificate"]                 = report_json(d.cascade.certificate.report);
    return j.dump(2) + "\n";
  }

  std::string to_json(DiagnosticReport const&           r,
                      TransformationSemigroupoid const& completed) {
    json j;
    j["original_arrow_count"]  = r.original_arrow_count;
    j["completed_arrow_count"] = r.completed_arrow_count;
    j["state_count"]           = r.state_count;
    j["new_elements"]          = json::array();
    for (auto const& t : r.new_elements) {
      j["new_elements"].push_back(transformation_json(completed, t));
    }
    if (r.orbit_witness) {
      json orbit = json::array();
      for (auto const& t : r.orbit_witness->orbit) {
        orbit.push_back(transformation_json(completed, t));
      }
      j["orbit_witness"] = {{"generator", r.orbit_witness->generator},
                            {"size", r.orbit_witness->orbit.size()},
                            {"orbit", orbit}};
    } else {
      j["orbit_witness"] = nullptr;
    }
    j["sink_absorbed"] = r.sink_absorbed;
    return j.dump(2) + "\n";
  }

  ////////////////////////////////////////////////////////////////////////
  // DOT
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void dot_body(std::ostream&       os,
                  Semigroupoid const& s,
                  std::string const&  prefix,
                  std::string const&  indent,
                  ArrowSet const*     only) {
      std::set<object_id> used;
      if (only != nullptr) {
        for (object_id x : supporting_objects(s, *only)) {
          used.insert(x);
        }
      }
      for (auto const& o : s.objects()) {
        if (only == nullptr || used.contains(o.id)) {
          os << indent << prefix << o.id << " [label=" << dot_quote(o.label) << "];\n";
        }
      }
      for (auto const& a : s.arrows()) {
        if (only == nullptr || only->contains(a.id)) {
          os << indent << prefix << a.dom << " -> " << prefix << a.cod
             << " [label=" << dot_quote(a.label) << "];\n";
        }
      }
    }
  }  // namespace

  std::string to_dot(Semigroupoid const& s, std::string const& name) {
    std::ostringstream os;
    os << "digraph " << dot_quote(name) << " {\n";
    dot_body(os, s, "o", "  ", nullptr);
    os << "}\n";
    return os.str();
  }

  std::string to_dot(Decomposition const& d) {
    std::ostringstream os;
    os << "digraph \"decomposition\" {\n  compound=true;\n";
    os << "  subgraph cluster_top {\n    label=\"top\";\n";
    dot_body(os, d.phi.target(), "t", "    ", nullptr);
    os << "  }\n";
    auto arrows = d.kernel.arrows();
    os << "  subgraph cluster_kernel {\n    label=\"kernel ("
       << to_string(d.kernel.strategy) << ")\";\n";
    dot_body(os, *d.kernel.codec.host, "k", "    ", &arrows);
    os << "  }\n}\n";
    return os.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Text reports
  ////////////////////////////////////////////////////////////////////////

  std::string format_kernel(Decomposition const& d) {
    auto const&        top  = d.phi.target();
    auto const&        host = *d.kernel.codec.host;
    std::ostringstream os;
    os << "strategy " << to_string(d.kernel.strategy) << '\n';
    for (std::size_t i = 0; i < d.kernel.classes.size(); ++i) {
      auto const&              k = d.kernel.classes[i];
      std::vector<std::string> tops;
      for (arrow_id f : k.tops) {
        tops.push_back(top.arrow(f).label);
      }
      os << "class " << i << " tops {" << join(tops, ", ") << "} representative "
         << top.arrow(k.representative).label << " arrows "
         << set_labels(host, k.arrows) << '\n';
    }
    os << "arrows " << d.kernel.arrow_count() << '\n';
    if (auto n = d.kernel.state_count()) {
      os << "states " << *n << '\n';
    }
    for (auto const& note : d.kernel.notes) {
      os << "note " << note << '\n';
    }
    return os.str();
  }

  std::string format_codec(Decomposition const& d) {
    auto const&        top  = d.phi.target();
    auto const&        src  = d.phi.source();
    auto const&        host = *d.kernel.codec.host;
    std::ostringstream os;
    for (auto const& tc : d.kernel.codec.tops) {
      for (auto [a, h] : tc.table) {
        os << "enc " << top.arrow(tc.top).label << ' ' << src.arrow(a).label
           << " = " << host.arrow(h).label << '\n';
      }
    }
    return os.str();
  }

  std::string format_rules(Decomposition const& d) {
    auto const&        top  = d.phi.target();
    auto const&        host = *d.kernel.codec.host;
    std::ostringstream os;
    for (auto const& cell : d.rules) {
      os << "cell " << top.arrow(cell.top_left).label << ' '
         << top.arrow(cell.top_right).label << " = "
         << top.arrow(cell.top_result).label << " carry "
         << (cell.carry ? host.arrow(*cell.carry).label : "-") << '\n';
      for (auto [a, b, r] : cell.entries) {
        os << "  " << host.arrow(a).label << ' ' << host.arrow(b).label << " = "
           << host.arrow(r).label << '\n';
      }
    }
    return os.str();
  }

  std::string format_certificate(Decomposition const& d) {
    std::ostringstream os;
    os << "tracing product: "
       << (d.tracing.certificate.valid() ? "valid" : "INVALID") << '\n'
       << d.tracing.certificate.report;
    os << "cascade: " << (d.cascade.certificate.valid() ? "valid" : "INVALID")
       << '\n'
       << d.cascade.certificate.report;
    return os.str();
  }

  std::string format_summary(Decomposition const& d) {
    std::ostringstream os;
    std::size_t        preimage_arrows = 0;
    for (auto const& tc : d.kernel.codec.tops) {
      preimage_arrows += tc.table.size();
    }
    os << "strategy: " << to_string(d.kernel.strategy) << '\n'
       << "top arrows: " << d.phi.target().number_of_arrows() << '\n'
       << "preimage arrows: " << preimage_arrows << '\n'
       << "kernel classes: " << d.kernel.classes.size() << '\n'
       << "kernel arrows: " << d.kernel.arrow_count() << '\n';
    if (auto n = d.kernel.state_count()) {
      os << "kernel states: " << *n << '\n';
    }
    os << "cascade arrows: " << d.cascade.cascade.pairs.size() << '\n'
       << "tracing product arrows: " << d.tracing.product.pairs.size() << '\n';
    if (d.reverts_to_tracing_product() && !d.compressed()) {
      os << "note: cascade is the tracing product (no compression)\n";
    }
    for (auto const& note : d.kernel.notes) {
      os << "note: " << note << '\n';
    }
    os << "certificate: " << (d.cascade.certificate.valid() ? "valid" : "INVALID")
       << '\n';
    if (!d.cascade.certificate.valid()) {
      os << d.cascade.certificate.report;
    }
    return os.str();
  }

  std::string format_diagnostic(DiagnosticReport const&           r,
                                TransformationSemigroupoid const& completed) {
    auto show = [&](Transformation const& t) {
      std::vector<std::string> xs;
      for (state_id y : t.images) {
        xs.push_back(completed.state_label(t.cod, y));
      }
      return "(" + join(xs, " ") + ")";
    };
    std::ostringstream os;
    os << "states: " << r.state_count << '\n'
       << "original arrows: " << r.original_arrow_count << '\n'
       << "completed arrows: " << r.completed_arrow_count << '\n'
       << "new elements: " << r.new_elements.size() << '\n';
    for (auto const& t : r.new_elements) {
      os << "  " << show(t) << '\n';
    }
    if (r.orbit_witness) {
      os << "orbit of " << r.orbit_witness->generator << ": "
         << r.orbit_witness->orbit.size() << " elements\n";
      for (auto const& t : r.orbit_witness->orbit) {
        os << "  " << show(t) << '\n';
      }
    }
    if (r.sink_absorbed > 0) {
      os << "sink-absorbed products: " << r.sink_absorbed << '\n';
    }
    return os.str();
  }

}  // namespace sgpoid
