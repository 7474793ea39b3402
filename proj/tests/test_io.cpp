#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sgpoid/commands.hpp"
#include "support.hpp"

using namespace sgpoid;
using namespace sgpoid::test;

namespace {
  SgdDocument parse(std::string const& text) {
    std::istringstream in(text);
    return parse_sgd(in, "mem.sgd");
  }

  std::size_t count(std::string const& text, std::string const& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos      = text.find(needle, pos + 1)) {
      ++n;
    }
    return n;
  }

  struct Run {
    int         code;
    std::string out;
    std::string err;
  };

  template <typename F>
  Run run(F&& f) {
    std::ostringstream out, err;
    int                code = f(out, err);
    return {code, out.str(), err.str()};
  }

  std::filesystem::path scratch(std::string const& name) {
    auto dir = std::filesystem::temp_directory_path() / "sgpoid-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
  }

  std::filesystem::path write(std::string const& name, std::string const& text) {
    auto p = scratch(name);
    std::ofstream(p) << text;
    return p;
  }
}  // namespace

TEST_CASE("parse errors carry line numbers", "[io]") {
  try {
    (void) parse("object X\narrow a X ->\n");
    FAIL("expected ParseError");
  } catch (ParseError const& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).starts_with("mem.sgd:2:"));
  }
  CHECK_THROWS_AS(parse("objekt X\n"), ParseError);
  CHECK_THROWS_AS(parse("object X\ncompose a b c\n"), ParseError);
  CHECK_THROWS_AS(read_sgd(fixture("does-not-exist.sgd")), ParseError);
}

TEST_CASE("dangling labels are structural errors with lines", "[io]") {
  auto doc = parse("object X\n# comment\narrow a X -> Y\n");
  try {
    (void) to_semigroupoid(doc);
    FAIL("expected StructuralError");
  } catch (StructuralError const& e) {
    CHECK(std::string(e.what()).find("mem.sgd:3") != std::string::npos);
  }
  CHECK_THROWS_AS(to_semigroupoid(parse("object X\nobject X\n")), StructuralError);
  CHECK_THROWS_AS(to_transformation(parse("object X 0\narrow a X -> X : 1\n")),
                  StructuralError);
  CHECK_THROWS_AS(to_transformation(parse("object X\narrow a X -> X\n")),
                  StructuralError);
}

TEST_CASE("concrete files without a table get the computed one", "[io]") {
  auto doc = read_sgd(fixture("z4.sgd"));
  CHECK(doc.is_concrete());
  auto s = to_semigroupoid(doc);
  CHECK(s.number_of_entries() == 16);
  CHECK(validate_semigroupoid(s).ok());
  CHECK_FALSE(read_sgd(fixture("fig2.sgd")).is_concrete());
}

TEST_CASE("round trips", "[io]") {
  for (auto name : {"flipflop.sgd", "fig2.sgd", "z4.sgd", "tn3.sgd", "nocompress.sgd",
                    "nocompress_top.sgd", "z2abs.sgd"}) {
    INFO(name);
    auto s    = load_sgd(name);
    auto text = emit_sgd(s);
    CHECK(to_semigroupoid(parse(text)) == s);
    CHECK(emit_sgd(to_semigroupoid(parse(text))) == text);
  }
  for (auto name : {"flipflop.sgd", "z4.sgd", "tn3.sgd", "nocompress.sgd"}) {
    INFO(name);
    auto ts = load_ts(name);
    CHECK(same_transformation_semigroupoid(to_transformation(parse(emit_sgd(ts))), ts));
  }
  auto d = decompose(std::get<RelationalMorphismTS>(load_fun("z4phi.fun")), Strategy::objects);
  auto const& cascade = *d.cascade.cascade.product;
  CHECK(to_semigroupoid(parse(emit_sgd(cascade))) == cascade);
}

TEST_CASE("functor files round trip", "[io]") {
  auto phi  = as_functor(load_fun("nocompress.fun"));
  auto text = emit_functor(phi, "nocompress.sgd", "nocompress_top.sgd");
  std::istringstream in(text);
  auto doc = parse_functor(in, "mem.fun", SGPOID_FIXTURES);
  CHECK(as_functor(load_functor(doc)) == phi);
}

TEST_CASE("functor files with dangling labels", "[io]") {
  std::istringstream in("source z4.sgd\ntarget z2.sgd\nmap +9 -> +0'\n");
  auto doc = parse_functor(in, "mem.fun", SGPOID_FIXTURES);
  CHECK_THROWS_AS(load_functor(doc), StructuralError);
  std::istringstream in2("source z4.sgd\nmap +0 -> +0'\n");
  CHECK_THROWS_AS(parse_functor(in2, "mem.fun", SGPOID_FIXTURES), ParseError);
}

TEST_CASE("json output parses", "[io]") {
  auto d = decompose(std::get<RelationalMorphismTS>(load_fun("z4phi.fun")), Strategy::objects);
  auto j = nlohmann::json::parse(to_json(d));
  CHECK(j["strategy"] == "objects");
  CHECK(j["compressed"] == true);
  CHECK(nlohmann::json::parse(to_json(load_sgd("fig2.sgd")))["arrows"].size() == 6);
  CHECK(nlohmann::json::parse(to_json(validate_semigroupoid(load_sgd("fig2_printed.sgd"))))
            .is_object());
}

TEST_CASE("dot output", "[io]") {
  auto ff = to_dot(load_sgd("flipflop.sgd"), "flipflop");
  CHECK(count(ff, "[label=") == 4);  // one node, three loops
  CHECK(count(ff, "o0 -> o0") == 3);
  auto f2 = to_dot(load_sgd("fig2.sgd"), "fig2");
  CHECK(count(f2, " -> ") == 6);
  CHECK(count(f2, "  o1 [") == 1);
  CHECK(to_dot(Semigroupoid{}, "E") == "digraph \"E\" {\n}\n");
  auto d = decompose(as_functor(load_fun("odometer2x2.fun")), Strategy::objects);
  auto dd = to_dot(d);
  CHECK(dd.find("subgraph cluster_top") != std::string::npos);
  CHECK(dd.find("subgraph cluster_kernel") != std::string::npos);
  CHECK(to_dot(d) == dd);
}

TEST_CASE("validate command", "[cli]") {
  auto ok = run([](auto& o, auto& e) { return cmd_validate(fixture("flipflop.sgd"), Format::text, o, e); });
  CHECK(ok.code == exit_ok);
  CHECK(ok.out == "valid\n");
  auto dangling = write("dangling.sgd", "object X\narrow a X -> Y\n");
  auto bad = run([&](auto& o, auto& e) { return cmd_validate(dangling, Format::text, o, e); });
  CHECK(bad.code == exit_invalid);
  CHECK(bad.err.find("dangling.sgd:2") != std::string::npos);
  auto truncated = write("truncated.sgd", "object X 0 1\narrow a X -> X :");
  auto t = run([&](auto& o, auto& e) { return cmd_validate(truncated, Format::text, o, e); });
  CHECK(t.code == exit_parse_error);
  auto missing = run([](auto& o, auto& e) { return cmd_validate(scratch("nope.sgd"), Format::text, o, e); });
  CHECK(missing.code == exit_parse_error);
  auto printed = run([](auto& o, auto& e) { return cmd_validate(fixture("fig2_printed.sgd"), Format::text, o, e); });
  CHECK(printed.code == exit_invalid);
  auto fun = run([](auto& o, auto& e) { return cmd_validate(fixture("z4phi.fun"), Format::text, o, e); });
  CHECK(fun.code == exit_ok);
  CHECK(fun.out.find("surjective: yes") != std::string::npos);
}

TEST_CASE("generate command", "[cli]") {
  auto count_arrows = [](std::string const& file) {
    auto r = run([&](auto& o, auto& e) { return cmd_generate(fixture(file), std::nullopt, Format::text, o, e); });
    REQUIRE(r.code == exit_ok);
    return count(r.out, "\narrow ") + (r.out.starts_with("arrow ") ? 1 : 0);
  };
  CHECK(count_arrows("z4gen.sgd") == 4);
  CHECK(count_arrows("dualmode.sgd") == 15);
  auto idonly = write("id.sgd", "object X 0 1\narrow i X -> X : 0 1\n");
  auto r = run([&](auto& o, auto& e) { return cmd_generate(idonly, std::nullopt, Format::text, o, e); });
  CHECK(count(r.out, "arrow ") == 1);
  auto abstract = run([](auto& o, auto& e) { return cmd_generate(fixture("fig2.sgd"), std::nullopt, Format::text, o, e); });
  CHECK(abstract.code == exit_invalid);
  auto illtyped = write("ill.sgd", "object X 0 1\nobject Y 0\narrow a X -> Y : 0 1\n");
  auto ill = run([&](auto& o, auto& e) { return cmd_generate(illtyped, std::nullopt, Format::text, o, e); });
  CHECK(ill.code == exit_invalid);
  // Output is byte deterministic.
  auto out1 = scratch("gen1.sgd");
  auto out2 = scratch("gen2.sgd");
  run([&](auto& o, auto& e) { return cmd_generate(fixture("tn3gen.sgd"), out1, Format::text, o, e); });
  run([&](auto& o, auto& e) { return cmd_generate(fixture("tn3gen.sgd"), out2, Format::text, o, e); });
  std::ifstream a(out1), b(out2);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(count(sa.str(), "arrow ") == 27);
}

TEST_CASE("decompose command", "[cli]") {
  auto dir = scratch("z4out");
  std::filesystem::remove_all(dir);
  auto r = run([&](auto& o, auto& e) { return cmd_decompose(fixture("z4phi.fun"), Strategy::objects, dir, Format::text, o, e); });
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("kernel states: 2") != std::string::npos);
  for (auto f : {"kernel.txt", "codec.txt", "rules.txt", "certificate.txt", "cascade.sgd",
                 "top.sgd", "host.sgd", "decomposition.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  // The cascade written out is itself a valid input.
  auto again = run([&](auto& o, auto& e) { return cmd_validate(dir / "cascade.sgd", Format::text, o, e); });
  CHECK(again.code == exit_ok);

  auto none = run([](auto& o, auto& e) { return cmd_decompose(fixture("z4phi.fun"), Strategy::none, std::nullopt, Format::json, o, e); });
  CHECK(none.code == exit_ok);
  CHECK(nlohmann::json::parse(none.out)["cascade"]["arrows"].size() == 4);

  for (auto s : {Strategy::sets, Strategy::objects, Strategy::none}) {
    auto nc = run([&](auto& o, auto& e) { return cmd_decompose(fixture("nocompress.fun"), s, std::nullopt, Format::text, o, e); });
    CHECK(nc.code == exit_ok);
    CHECK(nc.out.find("cascade is the tracing product") != std::string::npos);
  }

  auto notsurj = write("notsurj.fun", "source " + fixture("z4.sgd").string() + "\ntarget "
                                          + fixture("z2.sgd").string()
                                          + "\nmap +0 -> +0'\nmap +1 -> +0'\nmap +2 -> +0'\nmap +3 -> +0'\n");
  auto ns = run([&](auto& o, auto& e) { return cmd_decompose(notsurj, Strategy::none, std::nullopt, Format::text, o, e); });
  CHECK(ns.code == exit_invalid);
  CHECK(ns.err.find("+1'") != std::string::npos);
}

TEST_CASE("dot command", "[cli]") {
  auto r = run([](auto& o, auto& e) { return cmd_dot(fixture("fig2.sgd"), Strategy::objects, std::nullopt, o, e); });
  CHECK(r.code == exit_ok);
  CHECK(count(r.out, " -> ") == 6);
  auto bad = run([](auto& o, auto& e) { return cmd_dot(scratch("none.sgd"), Strategy::objects, std::nullopt, o, e); });
  CHECK(bad.code == exit_parse_error);
}

TEST_CASE("diagnose command", "[cli]") {
  auto pad = run([](auto& o, auto& e) { return cmd_diagnose(fixture("dualmode.sgd"), "pad", Format::text, o, e); });
  CHECK(pad.code == exit_ok);
  CHECK(pad.out.find(": 6 elements") != std::string::npos);
  auto sink = run([](auto& o, auto& e) { return cmd_diagnose(fixture("dualmode.sgd"), "sink", Format::text, o, e); });
  CHECK(sink.out.find("states: 6") != std::string::npos);
  auto closed = run([](auto& o, auto& e) { return cmd_diagnose(fixture("z4.sgd"), "pad", Format::text, o, e); });
  CHECK(closed.out.find("new elements: 0") != std::string::npos);
  auto abs = run([](auto& o, auto& e) { return cmd_diagnose(fixture("fig2.sgd"), "pad", Format::text, o, e); });
  CHECK(abs.code == exit_invalid);
}
