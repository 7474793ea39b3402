#include <catch2/catch_amalgamated.hpp>

#include <iostream>

#include "support.hpp"

using namespace sgpoid;
using namespace sgpoid::test;

namespace {
  std::vector<std::string> const one_object_fixtures{
      "flipflop.sgd", "z2.sgd", "z4.sgd", "tn2.sgd", "tn3.sgd"};

  std::vector<std::string> const all_fixtures{
      "flipflop.sgd", "z2.sgd", "z4.sgd", "tn2.sgd", "tn3.sgd", "fig2.sgd",
      "nocompress.sgd", "nocompress_top.sgd", "z2abs.sgd"};

  std::vector<std::string> const functor_fixtures{
      "z4phi.fun", "odometer2x2.fun", "nocompress.fun"};

  std::vector<RelationalFunctor> fixture_functors() {
    std::vector<RelationalFunctor> out;
    for (auto const& name : functor_fixtures) {
      out.push_back(as_functor(load_fun(name)));
    }
    for (auto const& name : all_fixtures) {
      out.push_back(identity_functor(load_sgd_ptr(name)));
    }
    auto t3 = std::make_shared<TransformationSemigroupoid const>(full_transformation_semigroup(3));
    out.push_back(image_typed_semigroupoid(*t3).functor);
    out.push_back(holonomy_seed_morphism(t3).arrow_functor());
    return out;
  }

  // The product table must be the componentwise one on the pairs of phi.
  void check_tracing_against_definition(RelationalFunctor const& phi,
                                        TracingResult const&     tr) {
    auto const& top = phi.target();
    auto const& bot = phi.source();
    std::set<std::pair<arrow_id, arrow_id>> expect;
    for (arrow_id a = 0; a < bot.number_of_arrows(); ++a) {
      for (auto f : phi.image(a)) {
        expect.emplace(f, a);
      }
    }
    auto const& pairs = tr.product.pairs;
    REQUIRE(std::set(pairs.begin(), pairs.end()) == expect);
    REQUIRE(pairs.size() == expect.size());
    auto const& p = *tr.product.product;
    for (arrow_id i = 0; i < pairs.size(); ++i) {
      for (arrow_id j = 0; j < pairs.size(); ++j) {
        auto [f, a] = pairs[i];
        auto [g, b] = pairs[j];
        auto fg     = top.try_compose(f, g);
        auto ab     = bot.try_compose(a, b);
        auto ij     = p.try_compose(i, j);
        if (fg && ab) {
          REQUIRE(ij);
          CHECK(pairs[*ij] == std::pair{*fg, *ab});
        } else {
          CHECK_FALSE(ij);
        }
      }
    }
  }

  bool same_structure(Semigroupoid const& x, Semigroupoid const& y) {
    if (x.number_of_arrows() != y.number_of_arrows()
        || x.number_of_objects() != y.number_of_objects()) {
      return false;
    }
    for (arrow_id f = 0; f < x.number_of_arrows(); ++f) {
      if (x.dom(f) != y.dom(f) || x.cod(f) != y.cod(f)) {
        return false;
      }
    }
    return x.entries() == y.entries();
  }
}  // namespace

TEST_CASE("tracing product emulates the source", "[decomposition][oracle]") {
  for (auto const& phi : fixture_functors()) {
    auto tr = tracing_product(phi);
    CHECK(tr.certificate.valid());
    CHECK(classify(tr.certificate.functor).injective);
    CHECK(validate_semigroupoid(*tr.product.product).ok());
    check_tracing_against_definition(phi, tr);
  }
  for (auto const& rc : random_functors(100)) {
    INFO(rc.kind);
    auto tr = tracing_product(rc.phi);
    CHECK(tr.certificate.valid());
    check_tracing_against_definition(rc.phi, tr);
    auto t = raw_table(*tr.product.product);
    CHECK(raw_is_semigroupoid(t));
    auto tau = raw_relation(tr.certificate.functor);
    CHECK(raw_is_relational_functor(raw_table(rc.phi.source()), t, tau));
    CHECK(raw_is_injective(tau));
  }
}

TEST_CASE("emulation certificate reports collisions", "[decomposition]") {
  auto s   = load_sgd_ptr("z4.sgd");
  auto t   = load_sgd_ptr("z2.sgd");
  auto phi = RelationalFunctor(s, t, {ArrowSet{0}, ArrowSet{1}, ArrowSet{0}, ArrowSet{1}});
  auto c   = verify_emulation(phi);
  CHECK_FALSE(c.valid());
  CHECK(c.report.contains(ViolationKind::not_injective));
  auto const& v = c.report.violations().front();
  CHECK(v.witness == std::vector<std::uint32_t>{0, 2, 0});
}

TEST_CASE("interchangeability agrees with exhaustive search", "[decomposition][oracle]") {
  for (auto const& name : all_fixtures) {
    INFO(name);
    auto s = load_sgd(name);
    auto t = raw_table(s);
    for (arrow_id f = 0; f < s.number_of_arrows(); ++f) {
      for (arrow_id g = 0; g < s.number_of_arrows(); ++g) {
        auto w = interchangeable(s, f, g);
        REQUIRE(w.has_value() == raw_interchangeable(t, f, g));
        if (w) {
          CHECK(check_interchange(s, f, g, *w));
          // Swapping the families gives a witness for (g, f).
          CHECK(check_interchange(s, g, f, {w->x_zx, w->x_xz, w->x_uy, w->x_yu}));
        }
      }
    }
  }
}

TEST_CASE("D-relation agrees with the ideal oracle", "[decomposition][oracle]") {
  for (auto const& name : one_object_fixtures) {
    auto s = load_sgd(name);
    auto t = raw_table(s);
    for (arrow_id f = 0; f < s.number_of_arrows(); ++f) {
      for (arrow_id g = 0; g < s.number_of_arrows(); ++g) {
        CHECK(d_relation(s, f, g) == raw_d_relation(t, f, g));
      }
    }
  }
  CHECK_THROWS_AS(d_relation(load_sgd("fig2.sgd"), 0, 1), Unsupported);
}

TEST_CASE("interchangeable iff D-related on one-object fixtures", "[decomposition]") {
  for (auto const& name : one_object_fixtures) {
    auto s = load_sgd(name);
    for (arrow_id f = 0; f < s.number_of_arrows(); ++f) {
      for (arrow_id g = 0; g < s.number_of_arrows(); ++g) {
        if (f == g) {
          continue;
        }
        INFO(name << ": " << s.arrow(f).label << ", " << s.arrow(g).label);
        CHECK(interchangeable(s, f, g).has_value() == d_relation(s, f, g));
      }
    }
  }
}

TEST_CASE("set equivalence witnesses", "[decomposition]") {
  auto s  = load_sgd("z4.sgd");
  auto p0 = arrow_named(s, "+0");
  auto p1 = arrow_named(s, "+1");
  auto p2 = arrow_named(s, "+2");
  auto p3 = arrow_named(s, "+3");
  ArrowSet even{p0, p2};
  ArrowSet odd{p1, p3};

  auto id = identity_witness(s, even);
  CHECK(id.is_identity());
  CHECK(check_set_equivalence(s, even, even, id));
  CHECK(id.bijection == std::vector<std::pair<arrow_id, arrow_id>>{{p0, p0}, {p2, p2}});

  // Conjugation in an abelian group fixes every element, so the endo and
  // transporter preimages of the parity map are not equivalent.
  CHECK_FALSE(preimage_sets_equivalent(s, even, odd).has_value());

  // Conjugating by +1 and +3 is allowed, and is the identity on Z4.
  SetEquivalenceWitness w{{0}, {0}, {p1}, {p3}, {}};
  CHECK(check_set_equivalence(s, even, even, w));
  CHECK(conjugate(s, w, p2) == p2);
  // +2, +2 are not mutually inverse relative to +1.
  SetEquivalenceWitness bad{{0}, {0}, {p2}, {p1}, {}};
  CHECK_FALSE(check_set_equivalence(s, odd, odd, bad));
}

TEST_CASE("set equivalence across isomorphic objects", "[decomposition]") {
  auto g  = load_ts("vessels.sgd");
  auto ts = generate_closure(g.state_sets(), g.arrows());
  auto const& s = ts.abstract();
  auto c  = arrow_named(s, "c");
  // g c f is the transposition on X2.
  auto gcf = compose(s, compose(s, arrow_named(s, "g"), c), arrow_named(s, "f"));
  auto w   = preimage_sets_equivalent(s, ArrowSet{c}, ArrowSet{gcf});
  REQUIRE(w);
  CHECK(w->bijection == std::vector<std::pair<arrow_id, arrow_id>>{{c, gcf}});
  auto back = invert_witness(*w);
  CHECK(check_set_equivalence(s, ArrowSet{gcf}, ArrowSet{c}, back));
  auto round = compose_witnesses(s, *w, back);
  REQUIRE(round);
  CHECK(check_set_equivalence(s, ArrowSet{c}, ArrowSet{c}, *round));

  auto classes = object_isomorphism_classes(s);
  CHECK(classes.representative == std::vector<object_id>{0, 0});
}

TEST_CASE("constant transporters give no isomorphic objects", "[decomposition]") {
  auto s       = load_sgd("nocompress.sgd");
  auto classes = object_isomorphism_classes(s);
  CHECK(classes.representative == std::vector<object_id>{0, 1});
}

TEST_CASE("Z4 over Z2 at transformation level", "[decomposition]") {
  auto m = std::get<RelationalMorphismTS>(load_fun("z4phi.fun"));
  auto d = decompose(m, Strategy::objects);
  REQUIRE(d.kernel.classes.size() == 1);
  CHECK(d.kernel.state_count() == 2u);
  CHECK(d.kernel.arrow_count() == 2);
  CHECK(d.compressed());
  auto const& host = *d.kernel.codec.host;
  auto        h0   = arrow_named(host, "+0@0");
  auto        h2   = arrow_named(host, "+2@0");
  CHECK(d.kernel.classes[0].arrows == ArrowSet{h0, h2});
  // +2 on {1, 3} is carried to +2 on {0, 2} by the +1, +3 pair.
  auto const& top = d.phi.target();
  auto        odd = arrow_named(top, "+1'");
  CHECK(encode(d.kernel.codec, odd, arrow_named(d.phi.source(), "+3")) == h2);
  CHECK(d.cascade.cascade.pairs.size() == 4);
  CHECK(d.cascade.certificate.valid());
  CHECK(d.tracing.certificate.valid());

  REQUIRE(d.rules.size() == 4);
  for (auto const& cell : d.rules) {
    REQUIRE(cell.carry);
    bool both_odd = cell.top_left == odd && cell.top_right == odd;
    CHECK(*cell.carry == (both_odd ? h2 : h0));
  }
  auto c = d.cascade.cascade.find(odd, h0);
  REQUIRE(c);
  CHECK(order(*d.cascade.cascade.product, *c) == 4);
}

TEST_CASE("the representative choice does not change validity", "[decomposition]") {
  auto m = std::get<RelationalMorphismTS>(load_fun("z4phi.fun"));
  for (auto rule : {Representative::smallest_min_id, Representative::largest_min_id}) {
    auto d = decompose(m, Strategy::objects, rule);
    CHECK(d.cascade.certificate.valid());
    CHECK(d.kernel.state_count() == 2u);
  }
  for (auto const& rc : random_functors(30)) {
    for (auto strategy : {Strategy::sets, Strategy::objects}) {
      auto d = decompose(rc.phi, strategy, Representative::largest_min_id);
      CHECK(check_codec(d.kernel.codec).ok());
    }
  }
}

TEST_CASE("codec identities", "[decomposition]") {
  auto check = [](RelationalFunctor const& phi, Strategy strategy) {
    auto        k = build_kernel(phi, strategy);
    auto const& c = k.codec;
    CHECK(check_codec(c).ok());
    auto pre = preimages(phi);
    for (arrow_id f = 0; f < pre.size(); ++f) {
      for (auto a : pre[f]) {
        auto h = encode(c, f, a);
        CHECK(decode(c, f, h) == a);
        CHECK(encode(c, f, decode(c, f, h)) == h);
      }
    }
  };
  for (auto const& phi : fixture_functors()) {
    for (auto strategy : {Strategy::sets, Strategy::objects, Strategy::none}) {
      check(phi, strategy);
    }
  }
  for (auto const& rc : random_functors(100)) {
    INFO(rc.kind);
    for (auto strategy : {Strategy::sets, Strategy::objects, Strategy::none}) {
      check(rc.phi, strategy);
    }
  }
  auto phi = as_functor(load_fun("z4phi.fun"));
  auto k   = build_kernel(phi, Strategy::none);
  // +1 is not a preimage of +0'.
  CHECK_THROWS_AS(encode(k.codec, 0, 1), ScopeError);
  CHECK_THROWS_AS(decode(k.codec, 0, 1), ScopeError);
}

TEST_CASE("uncompressed cascade is the tracing product", "[decomposition]") {
  auto check = [](RelationalFunctor const& phi) {
    auto d = decompose(phi, Strategy::none);
    CHECK(d.cascade.certificate.valid());
    CHECK(d.cascade.cascade.pairs == d.tracing.product.pairs);
    CHECK(same_structure(*d.cascade.cascade.product, *d.tracing.product.product));
    CHECK(d.reverts_to_tracing_product());
  };
  for (auto const& phi : fixture_functors()) {
    check(phi);
  }
  for (auto const& rc : random_functors(100)) {
    INFO(rc.kind);
    check(rc.phi);
  }
}

TEST_CASE("cascade composition is independent in the top level", "[decomposition]") {
  auto check = [](Decomposition const& d) {
    auto const& cas = d.cascade.cascade;
    for (auto const& e : cas.product->entries()) {
      auto top = d.phi.target().try_compose(cas.pairs[e.left].first,
                                            cas.pairs[e.right].first);
      REQUIRE(top);
      CHECK(cas.pairs[e.result].first == *top);
    }
  };
  check(decompose(std::get<RelationalMorphismTS>(load_fun("z4phi.fun")), Strategy::objects));
  for (auto const& rc : random_functors(60)) {
    for (auto strategy : {Strategy::sets, Strategy::objects}) {
      check(decompose(rc.phi, strategy));
    }
  }
}

TEST_CASE("compressed cascades on random functors", "[decomposition]") {
  std::size_t failures = 0, compressed = 0;
  for (auto const& rc : random_functors(100)) {
    for (auto strategy : {Strategy::sets, Strategy::objects}) {
      auto d = decompose(rc.phi, strategy);
      compressed += d.compressed();
      if (!d.cascade.certificate.valid()) {
        ++failures;
        std::cerr << "certificate failure (" << rc.kind << ", " << to_string(strategy)
                  << "):\n"
                  << d.cascade.certificate.report;
      }
    }
  }
  INFO("compressed cascades: " << compressed);
  CHECK(failures == 0);
}

TEST_CASE("no compression between the two Z2 types", "[decomposition]") {
  auto phi = as_functor(load_fun("nocompress.fun"));
  for (auto strategy : {Strategy::sets, Strategy::objects, Strategy::none}) {
    auto d = decompose(phi, strategy);
    CHECK(d.reverts_to_tracing_product());
    CHECK_FALSE(d.compressed());
    CHECK(d.cascade.certificate.valid());
    CHECK(d.cascade.cascade.pairs.size() == 12);
  }
}

TEST_CASE("two-Z2 odometer from a rule table", "[decomposition]") {
  auto top = load_sgd_ptr("z2abs.sgd");
  auto bot = std::make_shared<Semigroupoid const>(load_sgd("z2.sgd"));
  auto one = arrow_named(*top, "+1_1");
  auto b0  = arrow_named(*bot, "+0'");
  auto b1  = arrow_named(*bot, "+1'");
  std::map<std::pair<arrow_id, arrow_id>, arrow_id> carries;
  for (arrow_id f = 0; f < 2; ++f) {
    for (arrow_id g = 0; g < 2; ++g) {
      carries[{f, g}] = (f == one && g == one) ? b1 : b0;
    }
  }
  auto cas = cascade_from_rule_table(top, bot, carries);
  CHECK(cas.product->number_of_arrows() == 4);
  CHECK(validate_semigroupoid(*cas.product).ok());
  auto c = cas.find(one, b0);
  REQUIRE(c);
  CHECK(order(*cas.product, *c) == 4);

  for (auto const& cell : rule_table(cas)) {
    REQUIRE(cell.carry);
    CHECK(*cell.carry == ((cell.top_left == one && cell.top_right == one) ? b1 : b0));
  }

  // The same rule over Z4 counting in the bottom level gives an 8-cycle.
  auto z4  = load_sgd_ptr("z4.sgd");
  auto p0  = arrow_named(*z4, "+0");
  auto p1  = arrow_named(*z4, "+1");
  std::map<std::pair<arrow_id, arrow_id>, arrow_id> carries8;
  for (arrow_id f = 0; f < 2; ++f) {
    for (arrow_id g = 0; g < 2; ++g) {
      carries8[{f, g}] = (f == one && g == one) ? p1 : p0;
    }
  }
  auto cas8 = cascade_from_rule_table(top, z4, carries8);
  CHECK(validate_semigroupoid(*cas8.product).ok());
  CHECK(order(*cas8.product, *cas8.find(one, p0)) == 8);

  std::map<std::pair<arrow_id, arrow_id>, arrow_id> missing;
  CHECK_THROWS_AS(cascade_from_rule_table(top, bot, missing), StructuralError);
  CHECK_THROWS_AS(cascade_from_rule_table(load_sgd_ptr("fig2.sgd"), bot, carries),
                  Unsupported);
}

TEST_CASE("strategy names", "[decomposition]") {
  for (auto s : {Strategy::sets, Strategy::objects, Strategy::none}) {
    CHECK(parse_strategy(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_strategy("bogus"), Unsupported);
}
