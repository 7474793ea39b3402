#include "sgpoid/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "sgpoid/error.hpp"

namespace sgpoid {

  namespace {
    using opt_arrow = std::optional<arrow_id>;

    // Composite of a chain where empty entries are identities; nullopt if
    // some pair does not compose.
    opt_arrow chain(Semigroupoid const& s, std::initializer_list<opt_arrow> xs) {
      opt_arrow acc;
      for (auto const& x : xs) {
        if (!x) {
          continue;
        }
        if (!acc) {
          acc = x;
          continue;
        }
        acc = s.try_compose(*acc, *x);
        if (!acc) {
          return std::nullopt;
        }
      }
      return acc;
    }

    // Strict version: every entry must be present and every pair compose.
    opt_arrow product(Semigroupoid const& s, std::initializer_list<arrow_id> xs) {
      opt_arrow acc;
      for (arrow_id x : xs) {
        acc = acc ? s.try_compose(*acc, x) : opt_arrow(x);
        if (!acc) {
          return std::nullopt;
        }
      }
      return acc;
    }

    // e: X -> X fixes every arrow of s into or out of X.
    bool acts_as_identity(Semigroupoid const& s, arrow_id e, object_id x) {
      for (arrow_id a : s.arrows_to(x)) {
        if (s.try_compose(a, e) != a) {
          return false;
        }
      }
      for (arrow_id a : s.arrows_from(x)) {
        if (s.try_compose(e, a) != a) {
          return false;
        }
      }
      return true;
    }

    // e: X -> X fixes the arrows of p at X it composes with.
    bool acts_as_identity_on(Semigroupoid const&          s,
                             arrow_id                     e,
                             object_id                    x,
                             std::vector<arrow_id> const& p) {
      for (arrow_id a : p) {
        if (s.cod(a) == x && s.try_compose(a, e) != a) {
          return false;
        }
        if (s.dom(a) == x && s.try_compose(e, a) != a) {
          return false;
        }
      }
      return true;
    }

    std::string label_list(Semigroupoid const& s, ArrowSet const& p) {
      std::string out;
      for (arrow_id a : p) {
        out += (out.empty() ? "" : ",") + s.arrow(a).label;
      }
      return "{" + out + "}";
    }

    // Semigroupoid of pairs (f, h), typed by f in top and by a typing arrow in
    // \p typing.  compose(i, j) returns the pair of the composite of product
    // arrows i and j (already known to be composable).
    template <typename Compose>
    std::shared_ptr<Semigroupoid const>
    pair_semigroupoid(Semigroupoid const&                               top,
                      Semigroupoid const&                               typing,
                      Semigroupoid const&                               labels,
                      std::vector<std::pair<arrow_id, arrow_id>> const& pairs,
                      std::vector<arrow_id> const&                      typed_by,
                      Compose&&                                         compose) {
      std::set<std::pair<object_id, object_id>> obj_set;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [f, h] = pairs[i];
        obj_set.emplace(top.dom(f), typing.dom(typed_by[i]));
        obj_set.emplace(top.cod(f), typing.cod(typed_by[i]));
      }
      std::map<std::pair<object_id, object_id>, object_id> obj_index;
      std::vector<Object>                                  objects;
      for (auto const& [x, y] : obj_set) {
        auto id = static_cast<object_id>(objects.size());
        obj_index.emplace(std::pair{x, y}, id);
        objects.push_back(
            {id, "(" + top.object(x).label + "," + typing.object(y).label + ")"});
      }
      std::map<std::pair<arrow_id, arrow_id>, arrow_id> arrow_index;
      std::vector<Arrow>                                arrows;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [f, h] = pairs[i];
        auto id     = static_cast<arrow_id>(i);
        arrow_index.emplace(pairs[i], id);
        arrows.push_back(
            {id,
             obj_index.at({top.dom(f), typing.dom(typed_by[i])}),
             obj_index.at({top.cod(f), typing.cod(typed_by[i])}),
             "(" + top.arrow(f).label + "," + labels.arrow(h).label + ")"});
      }
      std::vector<CompositionEntry> entries;
      for (arrow_id i = 0; i < arrows.size(); ++i) {
        for (arrow_id j = 0; j < arrows.size(); ++j) {
          if (arrows[i].cod != arrows[j].dom) {
            continue;
          }
          std::optional<std::pair<arrow_id, arrow_id>> r = compose(i, j);
          if (!r) {
            continue;
          }
          auto it = arrow_index.find(*r);
          if (it != arrow_index.end()) {
            entries.push_back({i, j, it->second});
          }
        }
      }
      return std::make_shared<Semigroupoid const>(
          std::move(objects), std::move(arrows), std::move(entries));
    }
  }  // namespace

  std::string to_string(Strategy strategy) {
    switch (strategy) {
      case Strategy::sets:
        return "sets";
      case Strategy::objects:
        return "objects";
      case Strategy::none:
        return "none";
    }
    return "none";
  }

  Strategy parse_strategy(std::string const& name) {
    if (name == "sets") {
      return Strategy::sets;
    }
    if (name == "objects") {
      return Strategy::objects;
    }
    if (name == "none") {
      return Strategy::none;
    }
    throw Unsupported("unknown strategy \"" + name
                      + "\", expected sets, objects or none");
  }

  ////////////////////////////////////////////////////////////////////////
  // Emulation
  ////////////////////////////////////////////////////////////////////////

  EmulationCertificate verify_emulation(RelationalFunctor const& candidate) {
    EmulationCertificate cert{candidate, validate_relational_functor(candidate)};
    auto const&          s = candidate.source();
    auto const&          t = candidate.target();
    for (auto [a, b] : overlapping_images(candidate)) {
      arrow_id shared = 0;
      for (arrow_id x : candidate.image(a)) {
        if (candidate.image(b).contains(x)) {
          shared = x;
          break;
        }
      }
      cert.report.add(ViolationKind::not_injective,
                      "images of " + s.arrow(a).label + " and "
                          + s.arrow(b).label + " share " + t.arrow(shared).label,
                      {a, b, shared});
    }
    return cert;
  }

  ////////////////////////////////////////////////////////////////////////
  // Tracing product
  ////////////////////////////////////////////////////////////////////////

  TracingResult tracing_product(RelationalFunctor const& phi) {
    require_valid(phi);
    auto const  pre    = preimages(phi);
    auto const& top    = phi.target();
    auto const& bottom = phi.source();

    TracingResult r;
    r.product.top    = phi.target_ptr();
    r.product.bottom = phi.source_ptr();
    std::vector<arrow_id> typed_by;
    for (arrow_id f = 0; f < top.number_of_arrows(); ++f) {
      for (arrow_id a : pre[f]) {
        r.product.pairs.emplace_back(f, a);
        typed_by.push_back(a);
      }
    }
    auto const& pairs = r.product.pairs;
    r.product.product = pair_semigroupoid(
        top, bottom, bottom, pairs, typed_by,
        [&](arrow_id i, arrow_id j) -> std::optional<std::pair<arrow_id, arrow_id>> {
          auto fg = top.try_compose(pairs[i].first, pairs[j].first);
          auto ab = bottom.try_compose(pairs[i].second, pairs[j].second);
          if (!fg || !ab) {
            return std::nullopt;
          }
          return std::pair{*fg, *ab};
        });

    std::map<std::pair<arrow_id, arrow_id>, arrow_id> index;
    for (arrow_id i = 0; i < pairs.size(); ++i) {
      index.emplace(pairs[i], i);
    }
    std::vector<ArrowSet> tau;
    for (arrow_id a = 0; a < bottom.number_of_arrows(); ++a) {
      ArrowSet img;
      for (arrow_id x : phi.image(a)) {
        img.insert(index.at({x, a}));
      }
      tau.push_back(std::move(img));
    }
    r.certificate = verify_emulation(
        RelationalFunctor(phi.source_ptr(), r.product.product, std::move(tau)));
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Interchangeability
  ////////////////////////////////////////////////////////////////////////

  bool check_interchange(Semigroupoid const&       s,
                         arrow_id                  f,
                         arrow_id                  g,
                         InterchangeWitness const& w) {
    auto const x = s.dom(f), y = s.cod(f), z = s.dom(g), u = s.cod(g);
    auto typed = [&s](arrow_id a, object_id d, object_id c) {
      return s.dom(a) == d && s.cod(a) == c;
    };
    if (!typed(w.x_xz, x, z) || !typed(w.x_zx, z, x) || !typed(w.x_yu, y, u)
        || !typed(w.x_uy, u, y)) {
      return false;
    }
    return product(s, {w.x_zx, f, w.x_yu}) == g
           && product(s, {w.x_xz, g, w.x_uy}) == f
           && product(s, {w.x_xz, w.x_zx, f}) == f
           && product(s, {f, w.x_yu, w.x_uy}) == f
           && product(s, {w.x_zx, w.x_xz, g}) == g
           && product(s, {g, w.x_uy, w.x_yu}) == g;
  }

  std::optional<InterchangeWitness>
  interchangeable(Semigroupoid const& s, arrow_id f, arrow_id g) {
    auto const x = s.dom(f), y = s.cod(f), z = s.dom(g), u = s.cod(g);
    ArrowSet const h_xz = hom_set(s, x, z), h_zx = hom_set(s, z, x);
    ArrowSet const h_yu = hom_set(s, y, u), h_uy = hom_set(s, u, y);
    for (arrow_id x1 : h_xz) {
      for (arrow_id x2 : h_zx) {
        if (product(s, {x1, x2, f}) != f || product(s, {x2, x1, g}) != g) {
          continue;
        }
        for (arrow_id x3 : h_yu) {
          if (product(s, {x2, f, x3}) != g) {
            continue;
          }
          for (arrow_id x4 : h_uy) {
            InterchangeWitness w{x1, x2, x3, x4};
            if (check_interchange(s, f, g, w)) {
              return w;
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  bool d_relation(Semigroupoid const& s, arrow_id f, arrow_id g) {
    if (s.number_of_objects() != 1) {
      throw Unsupported("d_relation needs a one-object semigroupoid, got "
                        + std::to_string(s.number_of_objects()) + " objects");
    }
    auto const n     = static_cast<arrow_id>(s.number_of_arrows());
    auto       ideal = [&](arrow_id a) {
      std::vector<bool> in(n, false);
      in[a] = true;
      for (arrow_id x = 0; x < n; ++x) {
        in[compose(s, x, a)] = true;
        in[compose(s, a, x)] = true;
        for (arrow_id y = 0; y < n; ++y) {
          in[compose(s, compose(s, x, a), y)] = true;
        }
      }
      return in;
    };
    return ideal(g)[f] && ideal(f)[g];
  }

  ////////////////////////////////////////////////////////////////////////
  // Equivalence of arrow sets
  ////////////////////////////////////////////////////////////////////////

  bool SetEquivalenceWitness::is_identity() const {
    return std::none_of(forward.begin(), forward.end(), [](auto const& x) {
             return x.has_value();
           })
           && std::none_of(backward.begin(), backward.end(), [](auto const& x) {
                return x.has_value();
              });
  }

  SetEquivalenceWitness identity_witness(Semigroupoid const& s,
                                         ArrowSet const&     p) {
    SetEquivalenceWitness w;
    w.domain = supporting_objects(s, p);
    w.sigma  = w.domain;
    w.forward.assign(w.domain.size(), std::nullopt);
    w.backward.assign(w.domain.size(), std::nullopt);
    for (arrow_id a : p) {
      w.bijection.emplace_back(a, a);
    }
    return w;
  }

  namespace {
    std::optional<std::size_t> index_of(std::vector<object_id> const& v,
                                        object_id                     x) {
      auto it = std::find(v.begin(), v.end(), x);
      if (it == v.end()) {
        return std::nullopt;
      }
      return static_cast<std::size_t>(it - v.begin());
    }

    // q -> forward[sigma^-1 dom q] q backward[sigma^-1 cod q]
    opt_arrow unconjugate(Semigroupoid const&          s,
                          SetEquivalenceWitness const& w,
                          arrow_id                     q) {
      auto i = index_of(w.sigma, s.dom(q));
      auto j = index_of(w.sigma, s.cod(q));
      if (!i || !j) {
        return std::nullopt;
      }
      return chain(s, {w.forward[*i], opt_arrow(q), w.backward[*j]});
    }

    // The forward/backward pair at X -> Y fixes the arrows of p and q.
    bool family_ok(Semigroupoid const&          s,
                   object_id                    x,
                   object_id                    y,
                   opt_arrow                    fwd,
                   opt_arrow                    bwd,
                   std::vector<arrow_id> const& pq) {
      if (!fwd && !bwd) {
        return x == y;
      }
      if (!fwd || !bwd) {
        return false;
      }
      if (s.dom(*fwd) != x || s.cod(*fwd) != y || s.dom(*bwd) != y
          || s.cod(*bwd) != x) {
        return false;
      }
      auto e  = s.try_compose(*fwd, *bwd);
      auto e2 = s.try_compose(*bwd, *fwd);
      return e && e2 && acts_as_identity_on(s, *e, x, pq)
             && acts_as_identity_on(s, *e2, y, pq);
    }
  }  // namespace

  std::optional<arrow_id> conjugate(Semigroupoid const&          s,
                                    SetEquivalenceWitness const& w,
                                    arrow_id                     p) {
    auto i = index_of(w.domain, s.dom(p));
    auto j = index_of(w.domain, s.cod(p));
    if (!i || !j) {
      return std::nullopt;
    }
    return chain(s, {w.backward[*i], opt_arrow(p), w.forward[*j]});
  }

  bool check_set_equivalence(Semigroupoid const&    s,
                             ArrowSet const&        p,
                             ArrowSet const&        q,
                             SetEquivalenceWitness& w) {
    auto const n = w.domain.size();
    if (w.domain != supporting_objects(s, p) || w.sigma.size() != n
        || w.forward.size() != n || w.backward.size() != n) {
      return false;
    }
    auto sorted_sigma = w.sigma;
    std::sort(sorted_sigma.begin(), sorted_sigma.end());
    if (std::adjacent_find(sorted_sigma.begin(), sorted_sigma.end())
            != sorted_sigma.end()
        || sorted_sigma != supporting_objects(s, q) || p.size() != q.size()) {
      return false;
    }
    std::vector<arrow_id> pq = p.ids();
    pq.insert(pq.end(), q.begin(), q.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (!family_ok(s, w.domain[i], w.sigma[i], w.forward[i], w.backward[i], pq)) {
        return false;
      }
    }
    std::vector<std::pair<arrow_id, arrow_id>> bijection;
    ArrowSet                                   image;
    for (arrow_id a : p) {
      auto c = conjugate(s, w, a);
      if (!c || !q.contains(*c) || unconjugate(s, w, *c) != a) {
        return false;
      }
      bijection.emplace_back(a, *c);
      image.insert(*c);
    }
    if (image != q) {
      return false;
    }
    for (arrow_id b : q) {
      auto c = unconjugate(s, w, b);
      if (!c || !p.contains(*c) || conjugate(s, w, *c) != b) {
        return false;
      }
    }
    w.bijection = std::move(bijection);
    return true;
  }

  std::optional<SetEquivalenceWitness>
  preimage_sets_equivalent(Semigroupoid const& s,
                           ArrowSet const&     p,
                           ArrowSet const&     q) {
    auto const objs_p = supporting_objects(s, p);
    auto       objs_q = supporting_objects(s, q);
    if (p.size() != q.size() || objs_p.size() != objs_q.size()) {
      return std::nullopt;
    }
    std::vector<arrow_id> pq = p.ids();
    pq.insert(pq.end(), q.begin(), q.end());
    auto const n = objs_p.size();

    do {
      // Candidate families for every object, identity first.
      using Family = std::pair<opt_arrow, opt_arrow>;
      std::vector<std::vector<Family>> candidates(n);
      bool                             possible = true;
      for (std::size_t i = 0; i < n && possible; ++i) {
        object_id x = objs_p[i], y = objs_q[i];
        if (x == y) {
          candidates[i].emplace_back(std::nullopt, std::nullopt);
        }
        for (arrow_id u : hom_set(s, x, y)) {
          for (arrow_id v : hom_set(s, y, x)) {
            if (family_ok(s, x, y, u, v, pq)) {
              candidates[i].emplace_back(u, v);
            }
          }
        }
        possible = !candidates[i].empty();
      }
      if (!possible) {
        continue;
      }
      std::vector<std::size_t> choice(n, 0);
      while (true) {
        SetEquivalenceWitness w;
        w.domain = objs_p;
        w.sigma  = objs_q;
        for (std::size_t i = 0; i < n; ++i) {
          w.forward.push_back(candidates[i][choice[i]].first);
          w.backward.push_back(candidates[i][choice[i]].second);
        }
        if (check_set_equivalence(s, p, q, w)) {
          return w;
        }
        std::size_t k = n;
        while (k > 0 && ++choice[k - 1] == candidates[k - 1].size()) {
          choice[k - 1] = 0;
          --k;
        }
        if (k == 0) {
          break;
        }
      }
    } while (std::next_permutation(objs_q.begin(), objs_q.end()));
    return std::nullopt;
  }

  std::optional<SetEquivalenceWitness>
  compose_witnesses(Semigroupoid const&          s,
                    SetEquivalenceWitness const& pq,
                    SetEquivalenceWitness const& qr) {
    SetEquivalenceWitness w;
    w.domain = pq.domain;
    for (std::size_t i = 0; i < pq.domain.size(); ++i) {
      auto j = index_of(qr.domain, pq.sigma[i]);
      if (!j) {
        return std::nullopt;
      }
      w.sigma.push_back(qr.sigma[*j]);
      opt_arrow fwd = chain(s, {pq.forward[i], qr.forward[*j]});
      opt_arrow bwd = chain(s, {qr.backward[*j], pq.backward[i]});
      bool fwd_bad = (pq.forward[i] || qr.forward[*j]) && !fwd;
      bool bwd_bad = (pq.backward[i] || qr.backward[*j]) && !bwd;
      if (fwd_bad || bwd_bad) {
        return std::nullopt;
      }
      w.forward.push_back(fwd);
      w.backward.push_back(bwd);
    }
    return w;
  }

  SetEquivalenceWitness invert_witness(SetEquivalenceWitness const& pq) {
    std::vector<std::size_t> order(pq.sigma.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pq.sigma[a] < pq.sigma[b];
    });
    SetEquivalenceWitness w;
    for (std::size_t i : order) {
      w.domain.push_back(pq.sigma[i]);
      w.sigma.push_back(pq.domain[i]);
      w.forward.push_back(pq.backward[i]);
      w.backward.push_back(pq.forward[i]);
    }
    for (auto [a, b] : pq.bijection) {
      w.bijection.emplace_back(b, a);
    }
    std::sort(w.bijection.begin(), w.bijection.end());
    return w;
  }

  ////////////////////////////////////////////////////////////////////////
  // Object isomorphisms
  ////////////////////////////////////////////////////////////////////////

  ObjectClasses object_isomorphism_classes(Semigroupoid const& s) {
    auto const    n = s.number_of_objects();
    ObjectClasses oc;
    oc.representative.resize(n);
    oc.from_rep.assign(n, std::nullopt);
    oc.to_rep.assign(n, std::nullopt);
    std::vector<bool> assigned(n, false);
    for (object_id x = 0; x < n; ++x) {
      if (assigned[x]) {
        continue;
      }
      assigned[x]          = true;
      oc.representative[x] = x;
      for (object_id y = x + 1; y < n; ++y) {
        if (assigned[y]) {
          continue;
        }
        bool found = false;
        for (arrow_id u : hom_set(s, x, y)) {
          for (arrow_id v : hom_set(s, y, x)) {
            auto e  = s.try_compose(u, v);
            auto e2 = s.try_compose(v, u);
            if (e && e2 && acts_as_identity(s, *e, x)
                && acts_as_identity(s, *e2, y)) {
              assigned[y]          = true;
              oc.representative[y] = x;
              oc.from_rep[y]       = u;
              oc.to_rep[y]         = v;
              found                = true;
              break;
            }
          }
          if (found) {
            break;
          }
        }
      }
    }
    return oc;
  }

  ////////////////////////////////////////////////////////////////////////
  // Codec and kernel
  ////////////////////////////////////////////////////////////////////////

  arrow_id encode(Codec const& c, arrow_id f, arrow_id a) {
    if (f >= c.tops.size()) {
      throw ScopeError("no codec for top arrow id " + std::to_string(f));
    }
    auto const& table = c.tops[f].table;
    auto        it    = std::lower_bound(
        table.begin(), table.end(), std::pair<arrow_id, arrow_id>(a, 0));
    if (it == table.end() || it->first != a) {
      throw ScopeError("arrow " + c.source->arrow(a).label
                       + " is not in the preimage of top arrow id "
                       + std::to_string(f));
    }
    return it->second;
  }

  arrow_id decode(Codec const& c, arrow_id f, arrow_id h) {
    if (f >= c.tops.size()) {
      throw ScopeError("no codec for top arrow id " + std::to_string(f));
    }
    for (auto const& [a, e] : c.tops[f].table) {
      if (e == h) {
        return a;
      }
    }
    throw ScopeError("arrow " + c.host->arrow(h).label
                     + " is not an encoded arrow of top arrow id "
                     + std::to_string(f));
  }

  ValidationReport check_codec(Codec const& c) {
    ValidationReport report;
    for (auto const& tc : c.tops) {
      std::set<arrow_id> seen;
      for (auto const& [a, h] : tc.table) {
        if (!seen.insert(h).second) {
          report.add(ViolationKind::codec,
                     "enc of top arrow id " + std::to_string(tc.top)
                         + " is not injective at " + c.host->arrow(h).label,
                     {tc.top, a, h});
          continue;
        }
        if (decode(c, tc.top, encode(c, tc.top, a)) != a) {
          report.add(ViolationKind::codec,
                     "dec(enc(" + c.source->arrow(a).label
                         + ")) differs for top arrow id "
                         + std::to_string(tc.top),
                     {tc.top, a});
        }
        if (encode(c, tc.top, decode(c, tc.top, h)) != h) {
          report.add(ViolationKind::codec,
                     "enc(dec(" + c.host->arrow(h).label
                         + ")) differs for top arrow id "
                         + std::to_string(tc.top),
                     {tc.top, h});
        }
      }
    }
    return report;
  }

  std::size_t Kernel::arrow_count() const {
    std::size_t n = 0;
    for (auto const& k : classes) {
      n += k.arrows.size();
    }
    return n;
  }

  ArrowSet Kernel::arrows() const {
    ArrowSet out;
    for (auto const& k : classes) {
      out.insert(k.arrows);
    }
    return out;
  }

  std::optional<std::size_t> Kernel::state_count() const {
    if (!host_ts) {
      return std::nullopt;
    }
    std::size_t n = 0;
    for (object_id x : supporting_objects(*codec.host, arrows())) {
      n += host_ts->state_set(x).states.size();
    }
    return n;
  }

  namespace {
    arrow_id min_id(ArrowSet const& p) {
      return p.front();
    }

    // Among \p members pick the representative by \p rule (ties: lower top).
    arrow_id pick(std::vector<arrow_id> const& members,
                  std::vector<ArrowSet> const& pre,
                  Representative               rule) {
      arrow_id best = members.front();
      for (arrow_id m : members) {
        bool better = rule == Representative::smallest_min_id
                          ? min_id(pre[m]) < min_id(pre[best])
                          : min_id(pre[m]) > min_id(pre[best]);
        if (better) {
          best = m;
        }
      }
      return best;
    }

    TopArrowCodec codec_from(arrow_id f, std::size_t klass,
                             std::vector<std::pair<arrow_id, arrow_id>> table) {
      std::sort(table.begin(), table.end());
      return {f, klass, std::move(table)};
    }

    Kernel kernel_none(RelationalFunctor const& phi, std::vector<ArrowSet> const& pre) {
      Kernel k;
      k.strategy     = Strategy::none;
      k.codec.source = phi.source_ptr();
      k.codec.host   = phi.source_ptr();
      for (arrow_id f = 0; f < pre.size(); ++f) {
        k.classes.push_back({{f}, f, pre[f], {identity_witness(phi.source(), pre[f])}});
        std::vector<std::pair<arrow_id, arrow_id>> table;
        for (arrow_id a : pre[f]) {
          table.emplace_back(a, a);
        }
        k.codec.tops.push_back(codec_from(f, f, std::move(table)));
      }
      return k;
    }

    Kernel kernel_sets(RelationalFunctor const&     phi,
                       std::vector<ArrowSet> const& pre,
                       Representative               rule) {
      auto const& s = phi.source();
      auto const  n = static_cast<arrow_id>(pre.size());

      // edge[(i, j)] carries pre[i] onto pre[j].
      std::map<std::pair<arrow_id, arrow_id>, SetEquivalenceWitness> edge;
      std::vector<arrow_id>                                          parent(n);
      std::iota(parent.begin(), parent.end(), 0);
      auto root = [&](arrow_id x) {
        while (parent[x] != x) {
          x = parent[x] = parent[parent[x]];
        }
        return x;
      };
      for (arrow_id i = 0; i < n; ++i) {
        for (arrow_id j = i + 1; j < n; ++j) {
          if (auto w = preimage_sets_equivalent(s, pre[i], pre[j])) {
            edge.emplace(std::pair{j, i}, invert_witness(*w));
            edge.emplace(std::pair{i, j}, std::move(*w));
            parent[root(j)] = root(i);
          }
        }
      }

      std::map<arrow_id, std::vector<arrow_id>> components;
      for (arrow_id f = 0; f < n; ++f) {
        components[root(f)].push_back(f);
      }

      Kernel k;
      k.strategy     = Strategy::sets;
      k.codec.source = phi.source_ptr();
      k.codec.host   = phi.source_ptr();
      k.codec.tops.resize(n);

      auto add_class = [&](std::vector<arrow_id> const& tops, arrow_id rep,
                           std::vector<SetEquivalenceWitness> ws) {
        std::size_t id = k.classes.size();
        for (std::size_t i = 0; i < tops.size(); ++i) {
          std::vector<std::pair<arrow_id, arrow_id>> table = ws[i].bijection;
          k.codec.tops[tops[i]] = codec_from(tops[i], id, std::move(table));
        }
        k.classes.push_back({tops, rep, pre[rep], std::move(ws)});
      };

      for (auto const& [r, members] : components) {
        arrow_id                           rep = pick(members, pre, rule);
        std::vector<arrow_id>              kept{rep};
        std::vector<SetEquivalenceWitness> ws{identity_witness(s, pre[rep])};
        for (arrow_id m : members) {
          if (m == rep) {
            continue;
          }
          auto w = preimage_sets_equivalent(s, pre[m], pre[rep]);
          if (!w) {
            // Compose along a shortest path of pairwise witnesses and
            // re-check the result.
            std::map<arrow_id, arrow_id> prev{{m, m}};
            std::deque<arrow_id>         todo{m};
            while (!todo.empty() && !prev.contains(rep)) {
              arrow_id x = todo.front();
              todo.pop_front();
              for (arrow_id y : members) {
                if (!prev.contains(y) && edge.contains({x, y})) {
                  prev.emplace(y, x);
                  todo.push_back(y);
                }
              }
            }
            std::vector<arrow_id> path{rep};
            while (path.back() != m) {
              path.push_back(prev.at(path.back()));
            }
            std::reverse(path.begin(), path.end());
            std::optional<SetEquivalenceWitness> acc = edge.at({path[0], path[1]});
            for (std::size_t i = 1; acc && i + 1 < path.size(); ++i) {
              acc = compose_witnesses(s, *acc, edge.at({path[i], path[i + 1]}));
            }
            if (acc && check_set_equivalence(s, pre[m], pre[rep], *acc)) {
              w = std::move(acc);
              k.notes.push_back("preimage of " + phi.target().arrow(m).label
                                + " joined through a composite of "
                                + std::to_string(path.size() - 1)
                                + " witnesses");
            } else {
              k.notes.push_back("preimage of " + phi.target().arrow(m).label
                                + " kept separate: composed witness does not "
                                  "verify");
              add_class({m}, m, {identity_witness(s, pre[m])});
              continue;
            }
          }
          kept.push_back(m);
          ws.push_back(std::move(*w));
        }
        // Keep tops in id order within the class.
        std::vector<std::size_t> order(kept.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return kept[a] < kept[b]; });
        std::vector<arrow_id>              tops;
        std::vector<SetEquivalenceWitness> sorted_ws;
        for (std::size_t i : order) {
          tops.push_back(kept[i]);
          sorted_ws.push_back(std::move(ws[i]));
        }
        add_class(tops, rep, std::move(sorted_ws));
      }
      std::sort(k.classes.begin(), k.classes.end(),
                [](KernelClass const& a, KernelClass const& b) {
                  return a.tops.front() < b.tops.front();
                });
      for (std::size_t id = 0; id < k.classes.size(); ++id) {
        for (arrow_id f : k.classes[id].tops) {
          k.codec.tops[f].klass = id;
        }
      }
      return k;
    }

    // Classes of top arrows with equal encoded preimages.
    void group_by_encoding(Kernel&                                   k,
                           std::vector<ArrowSet> const&              pre,
                           std::vector<std::vector<std::pair<arrow_id, arrow_id>>> tables,
                           Representative                            rule) {
      std::map<ArrowSet, std::vector<arrow_id>> groups;
      std::vector<ArrowSet>                     encoded(pre.size());
      for (arrow_id f = 0; f < pre.size(); ++f) {
        for (auto [a, h] : tables[f]) {
          encoded[f].insert(h);
        }
        groups[encoded[f]].push_back(f);
      }
      std::vector<std::vector<arrow_id>> ordered;
      for (auto& [set, tops] : groups) {
        ordered.push_back(std::move(tops));
      }
      std::sort(ordered.begin(), ordered.end());
      k.codec.tops.resize(pre.size());
      for (auto const& tops : ordered) {
        std::size_t id  = k.classes.size();
        arrow_id    rep = pick(tops, pre, rule);
        k.classes.push_back({tops, rep, encoded[rep], {}});
        for (arrow_id f : tops) {
          k.codec.tops[f] = codec_from(f, id, std::move(tables[f]));
        }
      }
    }

    bool injective(std::vector<std::pair<arrow_id, arrow_id>> const& table) {
      std::set<arrow_id> seen;
      for (auto [a, h] : table) {
        if (!seen.insert(h).second) {
          return false;
        }
      }
      return true;
    }

    Kernel kernel_objects(RelationalFunctor const&     phi,
                          std::vector<ArrowSet> const& pre,
                          Representative               rule) {
      auto const& s  = phi.source();
      auto const  oc = object_isomorphism_classes(s);
      Kernel      k;
      k.strategy     = Strategy::objects;
      k.codec.source = phi.source_ptr();
      k.codec.host   = phi.source_ptr();
      std::vector<std::vector<std::pair<arrow_id, arrow_id>>> tables(pre.size());
      for (arrow_id f = 0; f < pre.size(); ++f) {
        bool ok = true;
        for (arrow_id a : pre[f]) {
          auto e = chain(
              s, {oc.from_rep[s.dom(a)], opt_arrow(a), oc.to_rep[s.cod(a)]});
          if (!e) {
            ok = false;
            break;
          }
          tables[f].emplace_back(a, *e);
        }
        if (!ok || !injective(tables[f])) {
          k.notes.push_back("encoding of the preimage of "
                            + phi.target().arrow(f).label + " "
                            + label_list(s, pre[f])
                            + " onto representative objects is not injective; "
                              "kept as is");
          tables[f].clear();
          for (arrow_id a : pre[f]) {
            tables[f].emplace_back(a, a);
          }
        }
      }
      group_by_encoding(k, pre, std::move(tables), rule);
      return k;
    }
  }  // namespace

  Kernel build_kernel(RelationalFunctor const& phi,
                      Strategy                 strategy,
                      Representative           rule) {
    require_valid(phi);
    auto const pre = preimages(phi);
    switch (strategy) {
      case Strategy::none:
        return kernel_none(phi, pre);
      case Strategy::sets:
        return kernel_sets(phi, pre, rule);
      case Strategy::objects:
        return kernel_objects(phi, pre, rule);
    }
    return kernel_none(phi, pre);
  }

  Kernel build_kernel(RelationalMorphismTS const& m,
                      Strategy                    strategy,
                      Representative              rule) {
    auto phi = m.arrow_functor();
    if (strategy != Strategy::objects) {
      return build_kernel(phi, strategy, rule);
    }
    require_valid(phi);
    auto const pre  = preimages(phi);
    auto       P    = pinhole_typed_semigroupoid(m);
    auto const host = P.typed->abstract_ptr();
    auto const oc   = object_isomorphism_classes(*host);

    // Restrict to the first pinhole, then move the codomain onto its
    // representative object.
    object_id const o0 = 0;
    std::vector<std::vector<std::pair<arrow_id, arrow_id>>> tables(pre.size());
    std::string failure;
    for (arrow_id f = 0; f < pre.size() && failure.empty(); ++f) {
      for (arrow_id s : pre[f]) {
        arrow_id r = P.restriction_index.at({s, f, o0});
        auto     e = chain(*host, {oc.from_rep[o0], opt_arrow(r), oc.to_rep[host->cod(r)]});
        if (!e) {
          failure = phi.target().arrow(f).label;
          break;
        }
        tables[f].emplace_back(s, *e);
      }
      if (failure.empty() && !injective(tables[f])) {
        failure = phi.target().arrow(f).label;
      }
    }
    if (!failure.empty()) {
      Kernel k = build_kernel(phi, Strategy::objects, rule);
      k.notes.insert(k.notes.begin(),
                     "pinhole encoding of the preimage of " + failure
                         + " is not injective; identified objects of the "
                           "source instead");
      return k;
    }
    Kernel k;
    k.strategy     = Strategy::objects;
    k.codec.source = phi.source_ptr();
    k.codec.host   = host;
    k.host_ts      = P.typed;
    group_by_encoding(k, pre, std::move(tables), rule);
    return k;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cascades
  ////////////////////////////////////////////////////////////////////////

  std::optional<arrow_id> Cascade::find(arrow_id f, arrow_id h) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{f, h});
    if (it == pairs.end() || *it != std::pair{f, h}) {
      return std::nullopt;
    }
    return static_cast<arrow_id>(it - pairs.begin());
  }

  CascadeResult pinhole_cascade(RelationalFunctor const& phi, Kernel const& k) {
    require_valid(phi);
    auto const& top    = phi.target();
    auto const& source = phi.source();
    auto const& codec  = k.codec;
    auto const& host   = *codec.host;

    CascadeResult r;
    r.cascade.top  = phi.target_ptr();
    r.cascade.host = codec.host;
    std::vector<arrow_id> typed_by;
    for (arrow_id f = 0; f < top.number_of_arrows(); ++f) {
      for (arrow_id h : k.classes.at(codec.tops.at(f).klass).arrows) {
        r.cascade.pairs.emplace_back(f, h);
        typed_by.push_back(decode(codec, f, h));
      }
    }
    auto const& pairs = r.cascade.pairs;
    r.cascade.product = pair_semigroupoid(
        top, source, host, pairs, typed_by,
        [&](arrow_id i, arrow_id j) -> std::optional<std::pair<arrow_id, arrow_id>> {
          auto fg = top.try_compose(pairs[i].first, pairs[j].first);
          auto ab = source.try_compose(typed_by[i], typed_by[j]);
          if (!fg || !ab) {
            return std::nullopt;
          }
          try {
            return std::pair{*fg, encode(codec, *fg, *ab)};
          } catch (ScopeError const&) {
            return std::nullopt;
          }
        });

    std::vector<ArrowSet> candidate;
    for (arrow_id a = 0; a < source.number_of_arrows(); ++a) {
      ArrowSet img;
      for (arrow_id f : phi.image(a)) {
        if (auto i = r.cascade.find(f, encode(codec, f, a))) {
          img.insert(*i);
        }
      }
      candidate.push_back(std::move(img));
    }
    r.certificate = verify_emulation(
        RelationalFunctor(phi.source_ptr(), r.cascade.product, std::move(candidate)));
    r.certificate.report.append(check_codec(codec));
    r.certificate.report.append(validate_semigroupoid(*r.cascade.product));
    return r;
  }

  std::vector<RuleCell> rule_table(Cascade const& c) {
    auto const&           top  = *c.top;
    auto const&           host = *c.host;
    auto const&           p    = *c.product;
    std::vector<RuleCell> out;
    for (auto const& f : top.arrows()) {
      for (arrow_id g : top.arrows_from(f.cod)) {
        auto fg = top.try_compose(f.id, g);
        if (!fg) {
          continue;
        }
        RuleCell cell{f.id, g, *fg, {}, std::nullopt};
        for (arrow_id i = 0; i < c.pairs.size(); ++i) {
          if (c.pairs[i].first != f.id) {
            continue;
          }
          for (arrow_id j : p.arrows_from(p.cod(i))) {
            if (c.pairs[j].first != g) {
              continue;
            }
            if (auto ij = p.try_compose(i, j)) {
              cell.entries.emplace_back(
                  c.pairs[i].second, c.pairs[j].second, c.pairs[*ij].second);
            }
          }
        }
        for (arrow_id k = 0; k < host.number_of_arrows() && !cell.entries.empty();
             ++k) {
          bool fits = std::all_of(
              cell.entries.begin(), cell.entries.end(), [&](auto const& e) {
                auto [a, b, res] = e;
                return product(host, {a, b, k}) == res;
              });
          if (fits) {
            cell.carry = k;
            break;
          }
        }
        out.push_back(std::move(cell));
      }
    }
    return out;
  }

  Cascade cascade_from_rule_table(
      std::shared_ptr<Semigroupoid const>                      top,
      std::shared_ptr<Semigroupoid const>                      bottom,
      std::map<std::pair<arrow_id, arrow_id>, arrow_id> const& carries) {
    if (top->number_of_objects() != 1 || bottom->number_of_objects() != 1) {
      throw Unsupported("rule-table cascades need one-object components");
    }
    Cascade c;
    c.top  = top;
    c.host = bottom;
    std::vector<arrow_id> typed_by;
    for (arrow_id f = 0; f < top->number_of_arrows(); ++f) {
      for (arrow_id a = 0; a < bottom->number_of_arrows(); ++a) {
        c.pairs.emplace_back(f, a);
        typed_by.push_back(a);
      }
    }
    for (arrow_id f = 0; f < top->number_of_arrows(); ++f) {
      for (arrow_id g = 0; g < top->number_of_arrows(); ++g) {
        if (!carries.contains({f, g})) {
          throw StructuralError("no carry for top pair (" + top->arrow(f).label
                                + ", " + top->arrow(g).label + ")");
        }
      }
    }
    auto const& pairs = c.pairs;
    c.product         = pair_semigroupoid(
        *top, *bottom, *bottom, pairs, typed_by,
        [&](arrow_id i, arrow_id j) -> std::optional<std::pair<arrow_id, arrow_id>> {
          auto [f, a] = pairs[i];
          auto [g, b] = pairs[j];
          auto fg     = top->try_compose(f, g);
          auto abk    = product(*bottom, {a, b, carries.at({f, g})});
          if (!fg || !abk) {
            return std::nullopt;
          }
          return std::pair{*fg, *abk};
        });
    return c;
  }

  std::size_t order(Semigroupoid const& s, arrow_id f) {
    if (s.dom(f) != s.cod(f)) {
      throw Unsupported("order needs an endo-arrow, " + s.arrow(f).label
                        + " has type " + s.type_string(f));
    }
    std::set<arrow_id> powers{f};
    for (arrow_id x = compose(s, f, f); powers.insert(x).second;
         x = compose(s, x, f)) {
    }
    return powers.size();
  }

  ////////////////////////////////////////////////////////////////////////
  // Pipeline
  ////////////////////////////////////////////////////////////////////////

  bool Decomposition::compressed() const {
    std::size_t total = 0;
    for (auto const& tc : kernel.codec.tops) {
      total += tc.table.size();
    }
    return kernel.arrow_count() < total;
  }

  bool Decomposition::reverts_to_tracing_product() const {
    auto const& cp = cascade.cascade;
    auto const& tp = tracing.product;
    if (cp.pairs.size() != tp.pairs.size()) {
      return false;
    }
    std::map<std::pair<arrow_id, arrow_id>, arrow_id> tindex;
    for (arrow_id i = 0; i < tp.pairs.size(); ++i) {
      tindex.emplace(tp.pairs[i], i);
    }
    std::vector<arrow_id> to_tracing;
    for (auto [f, h] : cp.pairs) {
      auto it = tindex.find({f, decode(kernel.codec, f, h)});
      if (it == tindex.end()) {
        return false;
      }
      to_tracing.push_back(it->second);
    }
    if (cp.product->number_of_entries() != tp.product->number_of_entries()) {
      return false;
    }
    for (auto const& e : cp.product->entries()) {
      if (tp.product->entry(to_tracing[e.left], to_tracing[e.right])
          != to_tracing[e.result]) {
        return false;
      }
    }
    return true;
  }

  namespace {
    Decomposition finish(RelationalFunctor phi, Kernel kernel) {
      Decomposition d;
      d.tracing = tracing_product(phi);
      d.cascade = pinhole_cascade(phi, kernel);
      d.rules   = rule_table(d.cascade.cascade);
      d.phi     = std::move(phi);
      d.kernel  = std::move(kernel);
      return d;
    }
  }  // namespace

  Decomposition decompose(RelationalFunctor const& phi,
                          Strategy                 strategy,
                          Representative           rule) {
    return finish(phi, build_kernel(phi, strategy, rule));
  }

  Decomposition decompose(RelationalMorphismTS const& m,
                          Strategy                    strategy,
                          Representative              rule) {
    return finish(m.arrow_functor(), build_kernel(m, strategy, rule));
  }

}  // namespace sgpoid
