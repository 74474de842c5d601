#include <doctest.h>

#include "mrlens/dsl.hpp"
#include "mrlens/errors.hpp"
#include "testing.hpp"

using namespace mrlens;
using namespace mrlens::testing;

TEST_CASE("regex parsing covers the surface forms") {
  MrePtr bind = parse_regex("bind x : \"a\"* in x . \"c\" . x");
  MrePtr expected = Mre::bind(
      "x", Mre::star(Mre::chr(U'a')),
      Mre::concat(Mre::concat(Mre::var("x"), Mre::chr(U'c')), Mre::var("x")));
  CHECK(structurally_equal(bind, expected));

  MrePtr alt = parse_regex("\"ba\" | \"ca\"");
  REQUIRE(alt->kind() == MreKind::Alt);
  CHECK(structurally_equal(alt->left(), Mre::literal("ba")));
  CHECK(structurally_equal(alt->right(), Mre::literal("ca")));

  CHECK(parse_regex("eps")->kind() == MreKind::Epsilon);
  CHECK(structurally_equal(parse_regex("\"\""), Mre::epsilon()));

  MrePtr cls = parse_regex("[a-c0]");
  REQUIRE(cls->kind() == MreKind::Alt);
  CHECK(cls->left()->ch() == U'a');

  CHECK(structurally_equal(parse_regex("\"\\u0041\\n\\t\\\\\\\"\""),
                           Mre::literal("A\n\t\\\"")));
}

TEST_CASE("lens parsing covers the surface forms") {
  auto file = load_fixture("pg.mrl");
  LensPtr line = fixture_lens(file, "pg_line_map_MR");
  REQUIRE(line->kind() == LensKind::Link);
  CHECK(line->name() == "fmap");
  CHECK(line->def()->kind() == LensKind::Id);
  CHECK(line->body()->kind() == LensKind::Swap);

  LensPtr c = parse_lens("\"a\" <-> \"A\"");
  CHECK(c->kind() == LensKind::Const);
  CHECK(c->s1() == "a");
  CHECK(c->s2() == "A");
  CHECK(structurally_equal(parse_lens("const(\"a\", \"A\")"), c));

  LensPtr iter = parse_lens("((\"a\" <-> \"x\") . (\"b\" <-> \"y\"))*");
  REQUIRE(iter->kind() == LensKind::Iter);
  CHECK(iter->inner()->kind() == LensKind::Concat);

  LensPtr comp = parse_lens("(\"a\" <-> \"b\") ; (\"b\" <-> \"c\")");
  CHECK(comp->kind() == LensKind::Comp);
}

TEST_CASE("identifiers resolve to binders, then definitions, then free variables") {
  auto file = parse_source(
      "r := \"a\"* ;\n"
      "uses_def := r . \"b\" ;\n"
      "shadows := bind r : \"c\" in r . r ;\n"
      "free_use := q . \"b\" ;\n");
  CHECK(structurally_equal(file.find("uses_def")->regex(),
                           Mre::concat(Mre::star(Mre::chr(U'a')), Mre::chr(U'b'))));
  const MrePtr& shadows = file.find("shadows")->regex();
  CHECK(shadows->body()->left()->kind() == MreKind::Var);
  CHECK(free_vars(file.find("free_use")->regex()) == std::set<std::string>{"q"});
}

TEST_CASE("definition kinds are inferred from the expression") {
  auto file = parse_source(
      "r := \"a\" ;\n"
      "l := \"a\" <-> \"b\" ;\n"
      "main l2 := l* ;\n");
  CHECK(file.find("r")->is_regex());
  CHECK_FALSE(file.find("l")->is_regex());
  CHECK(file.main() == file.find("l2"));
  CHECK(file.find("l2")->lens()->kind() == LensKind::Iter);
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_source("r := \"abc ;\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.col() == 6);
  }
  CHECK_THROWS_AS(parse_source("r := \"a\" ;\nr := \"b\" ;\n"), SyntaxError);
  CHECK_THROWS_AS(parse_regex("\"a\" |"), SyntaxError);
  CHECK_THROWS_AS(parse_regex("[]"), SyntaxError);
  CHECK_THROWS_AS(parse_lens("id(\"a\""), SyntaxError);
  // Using a lens definition in a regex position is rejected.
  CHECK_THROWS_AS(parse_source("l := \"a\" <-> \"b\" ;\nr := l . \"c\" ;\n"), SyntaxError);
}

TEST_CASE("comments and whitespace are ignored") {
  auto file = parse_source("# leading comment\nr := \"a\" ; # trailing\n\n# end\n");
  CHECK(file.definitions.size() == 1);
}

TEST_CASE("printing matches the concrete syntax") {
  CHECK(print_regex(parse_regex("bind x : \"a\"* in x . \"c\" . x")) ==
        "bind x : \"a\"* in x . \"c\" . x");
  CHECK(print_regex(parse_regex("\"ba\" | \"ca\"")) == "\"ba\" | \"ca\"");
  CHECK(print_regex(Mre::epsilon()) == "eps");
  CHECK(print_regex(Mre::literal("a\nb")) == "\"a\\nb\"");
  CHECK(print_lens(parse_lens("\"a\" <-> \"A\"")) == "\"a\" <-> \"A\"");
}

TEST_CASE("parse after print is the identity on regexes") {
  Gen gen(11);
  for (int i = 0; i < 400; ++i) {
    MrePtr r = gen.closed_regex(4);
    std::string text = print_regex(r);
    CAPTURE(text);
    CHECK(structurally_equal(parse_regex(text), r));
    CHECK(text.find('$') == std::string::npos);
  }
}

TEST_CASE("parse after print is the identity on lenses") {
  Gen gen(23);
  for (int i = 0; i < 400; ++i) {
    LensPtr l = gen.lens(4);
    std::string text = print_lens(l);
    CAPTURE(text);
    CHECK(structurally_equal(parse_lens(text), l));
  }
}

TEST_CASE("the full hyperlink fixture round-trips through the printer") {
  auto file = load_fixture("pg.mrl");
  for (const auto& def : file.definitions) {
    if (def.is_regex()) {
      CHECK(structurally_equal(parse_regex(print_regex(def.regex())), def.regex()));
    } else {
      CHECK(structurally_equal(parse_lens(print_lens(def.lens())), def.lens()));
    }
  }
}
