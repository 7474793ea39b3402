#pragma once

// Fixture loading, brute-force oracles and random relational functors for
// the tests.  The oracles work on plain vectors and re-derive everything from
// definitions; they do not call the algorithms they are used to check.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sgpoid/decomposition.hpp"
#include "sgpoid/io.hpp"
#include "sgpoid/relational.hpp"
#include "sgpoid/semigroupoid.hpp"
#include "sgpoid/transformation.hpp"

namespace sgpoid::test {

  inline std::filesystem::path fixture(std::string const& name) {
    return std::filesystem::path(SGPOID_FIXTURES) / name;
  }

  inline Semigroupoid load_sgd(std::string const& name) {
    return to_semigroupoid(read_sgd(fixture(name)));
  }

  inline std::shared_ptr<Semigroupoid const> load_sgd_ptr(std::string const& name) {
    return std::make_shared<Semigroupoid const>(load_sgd(name));
  }

  inline TransformationSemigroupoid load_ts(std::string const& name) {
    return to_transformation(read_sgd(fixture(name)));
  }

  inline LoadedFunctor load_fun(std::string const& name) {
    return load_functor(read_functor(fixture(name)));
  }

  inline arrow_id arrow_named(Semigroupoid const& s, std::string const& label) {
    auto f = s.find_arrow(label);
    if (!f) {
      throw std::runtime_error("no arrow " + label);
    }
    return *f;
  }

  ////////////////////////////////////////////////////////////////////////
  // Oracles on raw data
  ////////////////////////////////////////////////////////////////////////

  // (dom, cod, images)
  using RawMap = std::tuple<std::uint32_t, std::uint32_t, std::vector<std::uint32_t>>;

  inline RawMap raw(Transformation const& t) {
    return {t.dom, t.cod, t.images};
  }

  inline std::optional<RawMap> raw_compose(RawMap const& x, RawMap const& y) {
    if (std::get<1>(x) != std::get<0>(y)) {
      return std::nullopt;
    }
    std::vector<std::uint32_t> img;
    for (auto v : std::get<2>(x)) {
      img.push_back(std::get<2>(y)[v]);
    }
    return RawMap{std::get<0>(x), std::get<1>(y), img};
  }

  // Every product of generators, by repeated all-pairs multiplication until
  // nothing new appears.
  inline std::set<RawMap> raw_closure(std::vector<RawMap> const& gens) {
    std::set<RawMap> all(gens.begin(), gens.end());
    bool             grew = true;
    while (grew) {
      grew = false;
      std::vector<RawMap> now(all.begin(), all.end());
      for (auto const& x : now) {
        for (auto const& y : now) {
          if (auto z = raw_compose(x, y); z && all.insert(*z).second) {
            grew = true;
          }
        }
      }
    }
    return all;
  }

  // Dense table: table[f][g] = fg, -1 when undefined or ill typed.
  struct RawTable {
    std::vector<std::uint32_t>    dom, cod;
    std::vector<std::vector<int>> table;

    [[nodiscard]] std::size_t size() const {
      return dom.size();
    }
    [[nodiscard]] int mul(int f, int g) const {
      return f < 0 || g < 0 ? -1 : table[f][g];
    }
  };

  inline RawTable raw_table(Semigroupoid const& s) {
    RawTable t;
    auto     n = s.number_of_arrows();
    t.table.assign(n, std::vector<int>(n, -1));
    for (auto const& a : s.arrows()) {
      t.dom.push_back(a.dom);
      t.cod.push_back(a.cod);
    }
    for (std::uint32_t f = 0; f < n; ++f) {
      for (std::uint32_t g = 0; g < n; ++g) {
        if (t.cod[f] == t.dom[g]) {
          if (auto h = s.entry(f, g)) {
            t.table[f][g] = static_cast<int>(*h);
          }
        }
      }
    }
    return t;
  }

  // Closed, well typed and associative.
  inline bool raw_is_semigroupoid(RawTable const& t) {
    auto n = static_cast<int>(t.size());
    for (int f = 0; f < n; ++f) {
      for (int g = 0; g < n; ++g) {
        if (t.cod[f] != t.dom[g]) {
          continue;
        }
        int fg = t.table[f][g];
        if (fg < 0 || t.dom[fg] != t.dom[f] || t.cod[fg] != t.cod[g]) {
          return false;
        }
        for (int h = 0; h < n; ++h) {
          if (t.cod[g] == t.dom[h] && t.mul(fg, h) != t.mul(f, t.table[g][h])) {
            return false;
          }
        }
      }
    }
    return true;
  }

  using RawRelation = std::vector<std::set<int>>;

  inline RawRelation raw_relation(RelationalFunctor const& phi) {
    RawRelation r;
    for (auto const& img : phi.arrow_map()) {
      r.emplace_back(img.begin(), img.end());
    }
    return r;
  }

  // phi(f) non-empty; for composable f, g: phi(f)phi(g) non-empty and inside
  // phi(fg).
  inline bool raw_is_relational_functor(RawTable const&    s,
                                        RawTable const&    t,
                                        RawRelation const& phi) {
    auto n = static_cast<int>(s.size());
    for (int f = 0; f < n; ++f) {
      if (phi[f].empty()) {
        return false;
      }
    }
    for (int f = 0; f < n; ++f) {
      for (int g = 0; g < n; ++g) {
        if (s.cod[f] != s.dom[g]) {
          continue;
        }
        int  fg   = s.table[f][g];
        bool some = false;
        for (int x : phi[f]) {
          for (int y : phi[g]) {
            if (t.cod[x] != t.dom[y]) {
              continue;
            }
            int xy = t.table[x][y];
            if (xy < 0 || fg < 0 || !phi[fg].contains(xy)) {
              return false;
            }
            some = true;
          }
        }
        if (!some) {
          return false;
        }
      }
    }
    return true;
  }

  inline bool raw_is_surjective(RawTable const& t, RawRelation const& phi) {
    std::set<int> hit;
    for (auto const& img : phi) {
      hit.insert(img.begin(), img.end());
    }
    return hit.size() == t.size();
  }

  inline bool raw_is_injective(RawRelation const& phi) {
    for (std::size_t a = 0; a < phi.size(); ++a) {
      for (std::size_t b = a + 1; b < phi.size(); ++b) {
        for (int x : phi[a]) {
          if (phi[b].contains(x)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  // S^1 f S^1 in a one-object semigroupoid.
  inline std::set<int> raw_ideal(RawTable const& t, int f) {
    auto          n = static_cast<int>(t.size());
    std::set<int> out{f};
    for (int x = 0; x < n; ++x) {
      out.insert(t.mul(x, f));
      out.insert(t.mul(f, x));
      for (int y = 0; y < n; ++y) {
        out.insert(t.mul(t.mul(x, f), y));
      }
    }
    out.erase(-1);
    return out;
  }

  inline bool raw_d_relation(RawTable const& t, int f, int g) {
    return raw_ideal(t, g).contains(f) && raw_ideal(t, f).contains(g);
  }

  // Existence of x_xz, x_zx, x_yu, x_uy with g = x_zx f x_yu,
  // f = x_xz g x_uy, x_xz x_zx f = f = f x_yu x_uy and
  // x_zx x_xz g = g = g x_uy x_yu, by trying every quadruple.
  inline bool raw_interchangeable(RawTable const& t, int f, int g) {
    auto n = static_cast<int>(t.size());
    for (int a = 0; a < n; ++a) {      // X -> Z
      for (int b = 0; b < n; ++b) {    // Z -> X
        for (int c = 0; c < n; ++c) {  // Y -> U
          for (int d = 0; d < n; ++d) {  // U -> Y
            if (t.dom[a] != t.dom[f] || t.cod[a] != t.dom[g]
                || t.dom[b] != t.dom[g] || t.cod[b] != t.dom[f]
                || t.dom[c] != t.cod[f] || t.cod[c] != t.cod[g]
                || t.dom[d] != t.cod[g] || t.cod[d] != t.cod[f]) {
              continue;
            }
            if (t.mul(t.mul(b, f), c) == g && t.mul(t.mul(a, g), d) == f
                && t.mul(t.mul(a, b), f) == f && t.mul(f, t.mul(c, d)) == f
                && t.mul(t.mul(b, a), g) == g && t.mul(g, t.mul(d, c)) == g) {
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  ////////////////////////////////////////////////////////////////////////
  // Random surjective relational functors
  ////////////////////////////////////////////////////////////////////////

  inline std::uint64_t seed() {
    if (char const* s = std::getenv("SGPOID_SEED")) {
      return std::strtoull(s, nullptr, 10);
    }
    return 20240611;
  }

  // A random transformation semigroupoid with at most max_objects objects of
  // one to three states, closed from one to three random generators.
  inline std::optional<TransformationSemigroupoid>
  random_ts(std::mt19937_64& rng, std::size_t max_objects, std::size_t max_arrows) {
    auto pick = [&](std::size_t lo, std::size_t hi) {
      return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    std::size_t           k = pick(1, max_objects);
    std::vector<StateSet> sets;
    for (std::size_t o = 0; o < k; ++o) {
      StateSet s{"O" + std::to_string(o), {}};
      for (std::size_t x = 0, n = pick(1, 3); x < n; ++x) {
        s.states.push_back(std::to_string(x));
      }
      sets.push_back(s);
    }
    std::vector<TransformationSemigroupoid::TypedArrow> gens;
    for (std::size_t i = 0, n = pick(1, 3); i < n; ++i) {
      auto           d = static_cast<object_id>(pick(0, k - 1));
      auto           c = static_cast<object_id>(pick(0, k - 1));
      Transformation t{d, c, {}};
      for (std::size_t x = 0; x < sets[d].states.size(); ++x) {
        t.images.push_back(static_cast<state_id>(pick(0, sets[c].states.size() - 1)));
      }
      gens.push_back({"g" + std::to_string(i), t});
    }
    // Drop objects no generator touches; they would be isolated.
    std::vector<bool> used(k, false);
    for (auto const& g : gens) {
      used[g.map.dom] = used[g.map.cod] = true;
    }
    std::vector<object_id> renum(k);
    std::vector<StateSet>  kept;
    for (std::size_t o = 0; o < k; ++o) {
      if (used[o]) {
        renum[o] = static_cast<object_id>(kept.size());
        kept.push_back(sets[o]);
      }
    }
    for (auto& g : gens) {
      g.map.dom = renum[g.map.dom];
      g.map.cod = renum[g.map.cod];
    }
    auto ts = generate_closure(kept, gens);
    if (ts.number_of_arrows() > max_arrows) {
      return std::nullopt;
    }
    return ts;
  }

  // The semigroupoid with one arrow per non-empty hom-set of s.
  inline std::shared_ptr<Semigroupoid const> codiscrete_image(Semigroupoid const& s,
                                                              std::vector<ArrowSet>& map) {
    std::map<std::pair<object_id, object_id>, arrow_id> ids;
    std::vector<Arrow>                                  arrows;
    for (auto const& a : s.arrows()) {
      if (ids.emplace(std::pair{a.dom, a.cod}, arrows.size()).second) {
        arrows.push_back({static_cast<arrow_id>(arrows.size()), a.dom, a.cod,
                          s.object(a.dom).label + s.object(a.cod).label});
      }
    }
    std::vector<CompositionEntry> entries;
    for (auto const& x : arrows) {
      for (auto const& y : arrows) {
        if (x.cod == y.dom) {
          entries.push_back({x.id, y.id, ids.at({x.dom, y.cod})});
        }
      }
    }
    std::vector<Object> objects(s.objects().begin(), s.objects().end());
    map.clear();
    for (auto const& a : s.arrows()) {
      map.push_back(ArrowSet{ids.at({a.dom, a.cod})});
    }
    return std::make_shared<Semigroupoid const>(objects, arrows, entries);
  }

  // The quotient by the smallest congruence identifying the given pairs of
  // parallel arrows.
  inline std::shared_ptr<Semigroupoid const>
  congruence_quotient(Semigroupoid const&                              s,
                      std::vector<std::pair<arrow_id, arrow_id>> const& seeds,
                      std::vector<ArrowSet>&                           map) {
    auto                  n = s.number_of_arrows();
    std::vector<arrow_id> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](arrow_id a) {
      while (parent[a] != a) {
        a = parent[a] = parent[parent[a]];
      }
      return a;
    };
    auto unite = [&](arrow_id a, arrow_id b) {
      a = find(a);
      b = find(b);
      if (a == b) {
        return false;
      }
      parent[std::max(a, b)] = std::min(a, b);
      return true;
    };
    for (auto [a, b] : seeds) {
      unite(a, b);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto const& e1 : s.entries()) {
        for (auto const& e2 : s.entries()) {
          if (find(e1.left) == find(e2.left) && find(e1.right) == find(e2.right)) {
            changed = unite(e1.result, e2.result) || changed;
          }
        }
      }
    }
    std::map<arrow_id, arrow_id> cls;
    std::vector<Arrow>           arrows;
    for (arrow_id a = 0; a < n; ++a) {
      auto r = find(a);
      if (!cls.contains(r)) {
        auto id = static_cast<arrow_id>(arrows.size());
        cls[r]  = id;
        arrows.push_back({id, s.dom(a), s.cod(a), "[" + s.arrow(r).label + "]"});
      }
    }
    std::set<std::tuple<arrow_id, arrow_id, arrow_id>> entries;
    for (auto const& e : s.entries()) {
      entries.insert({cls[find(e.left)], cls[find(e.right)], cls[find(e.result)]});
    }
    std::vector<CompositionEntry> table;
    for (auto [l, r, res] : entries) {
      table.push_back({l, r, res});
    }
    map.clear();
    for (arrow_id a = 0; a < n; ++a) {
      map.push_back(ArrowSet{cls[find(a)]});
    }
    std::vector<Object> objects(s.objects().begin(), s.objects().end());
    return std::make_shared<Semigroupoid const>(objects, arrows, table);
  }

  struct RandomCase {
    std::string       kind;
    RelationalFunctor phi;
  };

  // Produces `count` valid surjective functors with sources of at most three
  // objects and eight arrows, cycling through several constructions.
  inline std::vector<RandomCase> random_functors(std::size_t count,
                                                 std::uint64_t s = seed()) {
    std::mt19937_64         rng(s);
    std::vector<RandomCase> out;
    std::size_t             turn = 0;
    while (out.size() < count) {
      auto ts = random_ts(rng, 3, 8);
      if (!ts) {
        continue;
      }
      auto        src = ts->abstract_ptr();
      auto        n   = src->number_of_arrows();
      std::string kind;
      std::optional<RelationalFunctor> phi;
      switch (turn++ % 6) {
        case 0:
          kind = "identity";
          phi  = identity_functor(src);
          break;
        case 1: {
          kind = "codiscrete";
          std::vector<ArrowSet> map;
          auto                  tgt = codiscrete_image(*src, map);
          phi.emplace(src, tgt, map);
          break;
        }
        case 2: {
          kind = "quotient";
          std::vector<std::pair<arrow_id, arrow_id>> seeds;
          for (int tries = 0; tries < 4 && seeds.empty(); ++tries) {
            auto a = static_cast<arrow_id>(rng() % n);
            auto b = static_cast<arrow_id>(rng() % n);
            if (a != b && src->dom(a) == src->dom(b) && src->cod(a) == src->cod(b)) {
              seeds.emplace_back(a, b);
            }
          }
          std::vector<ArrowSet> map;
          auto                  tgt = congruence_quotient(*src, seeds, map);
          phi.emplace(src, tgt, map);
          break;
        }
        case 3: {
          kind = "holonomy-seed";
          if (ts->state_sets().size() != 1 || ts->state_sets()[0].states.size() < 2) {
            continue;
          }
          auto m = holonomy_seed_morphism(
              std::make_shared<TransformationSemigroupoid const>(*ts));
          phi = m.arrow_functor();
          break;
        }
        case 4: {
          kind = "image-typing";
          if (ts->state_sets().size() != 1) {
            continue;
          }
          phi = image_typed_semigroupoid(*ts).functor;
          break;
        }
        default: {
          // A random relation into a quotient: each arrow goes to its class
          // and, with some probability, to one more parallel class.
          kind = "relation";
          std::vector<ArrowSet> map;
          auto                  seeds = std::vector<std::pair<arrow_id, arrow_id>>{};
          auto                  tgt   = congruence_quotient(*src, seeds, map);
          for (auto& img : map) {
            if (rng() % 3 == 0) {
              img.insert(static_cast<arrow_id>(rng() % tgt->number_of_arrows()));
            }
          }
          phi.emplace(src, tgt, map);
          break;
        }
      }
      if (!validate_relational_functor(*phi).ok() || !classify(*phi).surjective) {
        continue;
      }
      out.push_back({kind, *phi});
    }
    return out;
  }

}  // namespace sgpoid::test
