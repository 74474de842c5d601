#include <doctest.h>

#include "mrlens/errors.hpp"
#include "mrlens/lens.hpp"
#include "mrlens/oracle.hpp"
#include "testing.hpp"

using namespace mrlens;
using namespace mrlens::testing;

namespace {

LensType check0(const LensPtr& l) { return typecheck(LensTypeEnv{}, RegexTypeEnv{}, l); }

LensPtr link_fixture() {
  return parse_lens("link y = (\"a\" <-> \"A\")* in y . id(\"b\") . y");
}

}  // namespace

TEST_CASE("constant lenses type as their string pair") {
  LensType t = check0(Lens::constant("s1", "s2"));
  CHECK(structurally_equal(t.source, Mre::literal("s1")));
  CHECK(structurally_equal(t.target, Mre::literal("s2")));
}

TEST_CASE("link lenses type as a pair of binders with fresh variables") {
  LensType t = check0(link_fixture());
  MrePtr expected_src = Mre::bind(
      "y$0", Mre::star(Mre::chr(U'a')),
      Mre::concat(Mre::concat(Mre::var("y$0"), Mre::chr(U'b')), Mre::var("y$0")));
  MrePtr expected_tgt = Mre::bind(
      "y$1", Mre::star(Mre::chr(U'A')),
      Mre::concat(Mre::concat(Mre::var("y$1"), Mre::chr(U'b')), Mre::var("y$1")));
  CHECK(structurally_equal(t.source, expected_src));
  CHECK(structurally_equal(t.target, expected_tgt));
}

TEST_CASE("the hyperlink lens types as starred binders over both formats") {
  auto file = load_fixture("pg.mrl");
  LensType t = check0(fixture_lens(file, "pg_map_MR"));

  REQUIRE(t.source->kind() == MreKind::Star);
  REQUIRE(t.source->inner()->kind() == MreKind::Bind);
  CHECK(t.source->inner()->name() == "fmap$0");
  REQUIRE(t.target->inner()->kind() == MreKind::Bind);
  CHECK(t.target->inner()->name() == "fmap$1");

  // The inferred types describe exactly the checked-in page fixtures.
  Mrras source_machine = compile(t.source);
  Mrras target_machine = compile(t.target);
  std::string html = read_fixture("gutenberg_html.txt");
  std::string md = read_fixture("gutenberg_md.txt");
  auto strip_newlines = [](std::string s) {
    std::string out;
    for (char c : s) {
      if (c != '\n') out.push_back(c);
    }
    return out;
  };
  CHECK(accepts(source_machine, strip_newlines(html)));
  CHECK(accepts(target_machine, strip_newlines(md)));
  CHECK_FALSE(accepts(source_machine, strip_newlines(md)));
}

TEST_CASE("ambiguous alternation is rejected with the failing rule") {
  LensPtr bad = parse_lens("(\"a\" <-> \"A\") | (\"a\" <-> \"B\")");
  CHECK_THROWS_WITH_AS(check0(bad),
                       "OrT: source side: \"a\" matches both alternatives", TypeError);
  try {
    check0(bad);
  } catch (const TypeError& e) {
    CHECK(e.rule() == "OrT");
    CHECK(e.code() == "ambiguous-side");
  }
  CHECK_NOTHROW(check0(Lens::constant("a", "A")));
  CHECK_NOTHROW(check0(Lens::constant("a", "B")));
}

TEST_CASE("identity lenses require closed, unambiguous regexes") {
  CHECK_THROWS_AS(check0(Lens::id(Mre::var("x"))), TypeError);
  CHECK_THROWS_AS(check0(Lens::id(parse_regex("\"a\" | \"a\""))), TypeError);
  LensType t = check0(Lens::id(parse_regex("(\"a\" | \"b\")*")));
  CHECK(alpha_equivalent(t.source, t.target));
}

TEST_CASE("composition requires agreeing middle types") {
  LensPtr good = parse_lens("(\"a\" <-> \"b\") ; (\"b\" <-> \"c\")");
  LensType t = check0(good);
  CHECK(structurally_equal(t.source, Mre::literal("a")));
  CHECK(structurally_equal(t.target, Mre::literal("c")));

  LensPtr bad = parse_lens("(\"a\" <-> \"b\") ; (\"x\" <-> \"c\")");
  CHECK_THROWS_AS(check0(bad), TypeError);
  try {
    check0(bad);
  } catch (const TypeError& e) {
    CHECK(e.code() == "comp-middle-mismatch");
  }
}

TEST_CASE("unbound lens variables fail type checking") {
  CHECK_THROWS_AS(check0(Lens::var("fmap")), TypeError);
}

TEST_CASE("big-step evaluation of the worked link lens") {
  LensPtr l = link_fixture();
  CHECK(eval(l, Direction::Get, "aabaa") == "AAbAA");
  CHECK(eval(l, Direction::Get, "b") == "b");
  CHECK(eval(l, Direction::Put, "AbA") == "aba");
  CHECK_THROWS_AS(eval(l, Direction::Get, "aaba"), ParseFailure);
}

TEST_CASE("the hyperlink lens translates the running example line") {
  auto file = load_fixture("pg.mrl");
  LensPtr line = fixture_lens(file, "pg_line_map_MR");
  CHECK(eval(line, Direction::Get,
             "<a href=\"https://www.gutenberg.org/dirs/GUTINDEX.2021\">GUTINDEX.2021</a>") ==
        "[GUTINDEX.2021](https://www.gutenberg.org/dirs/GUTINDEX.2021)");
  CHECK(eval(line, Direction::Put,
             "[GUTINDEX.2021](https://www.gutenberg.org/dirs/GUTINDEX.2021)") ==
        "<a href=\"https://www.gutenberg.org/dirs/GUTINDEX.2021\">GUTINDEX.2021</a>");
  // Mismatched filenames are outside the source language.
  CHECK_THROWS_AS(
      eval(line, Direction::Get,
           "<a href=\"https://www.gutenberg.org/dirs/GUTINDEX.1920\">GUTINDEX.2019</a>"),
      ParseFailure);
}

TEST_CASE("operational environments validate values against their types") {
  LensTypeEnv lempty;
  RegexTypeEnv rempty;
  RegexValueEnv vempty;
  CHECK(step_envs_well_formed(lempty, rempty, vempty));

  LensTypeEnv lenv = lempty.extended("y", "x1", "x2");
  RegexTypeEnv renv = rempty.extended("x1", Mre::star(Mre::chr(U'a')))
                          .extended("x2", Mre::star(Mre::chr(U'A')));
  RegexValueEnv venv = vempty.extended("x1", "aa").extended("x2", "AA");
  CHECK(step_envs_well_formed(lenv, renv, venv));
  CHECK_FALSE(step_envs_well_formed(lenv, renv, vempty.extended("x1", "aa")));
  CHECK_FALSE(step_envs_well_formed(lenv, renv, vempty.extended("x1", "aa").extended("x2", "ab")));
}

TEST_CASE("variable lenses look up both sides of the pair") {
  LensTypeEnv lenv = LensTypeEnv{}.extended("y", "x1", "x2");
  RegexTypeEnv renv = RegexTypeEnv{}
                          .extended("x1", Mre::star(Mre::chr(U'a')))
                          .extended("x2", Mre::star(Mre::chr(U'A')));
  RegexValueEnv venv = RegexValueEnv{}.extended("x1", "aa").extended("x2", "AA");
  LensPtr y = Lens::var("y");
  CHECK(eval(y, Direction::Get, "aa", lenv, renv, venv) == "AA");
  CHECK(eval(y, Direction::Put, "AA", lenv, renv, venv) == "aa");
  CHECK_THROWS_AS(eval(y, Direction::Get, "a", lenv, renv, venv), ParseFailure);
}

TEST_CASE("round-tripping laws hold for the lens fixtures") {
  auto file = load_fixture("lenses.mrl");
  RegexValueEnv empty;
  int lenses_checked = 0;
  for (const auto& def : file.definitions) {
    LensPtr l = def.lens();
    LensType t = check0(l);
    ++lenses_checked;
    for (const auto& s : enumerate_regex(t.source, empty, 6)) {
      std::string out = eval(l, Direction::Get, s);
      CHECK_MESSAGE(eval(l, Direction::Put, out) == s, def.name, ": GetPut failed on \"", s,
                    "\"");
    }
    for (const auto& u : enumerate_regex(t.target, empty, 6)) {
      std::string back = eval(l, Direction::Put, u);
      CHECK_MESSAGE(eval(l, Direction::Get, back) == u, def.name, ": PutGet failed on \"", u,
                    "\"");
    }
  }
  CHECK(lenses_checked == 13);
}

TEST_CASE("get is total on the bounded source language with bounded growth") {
  auto file = load_fixture("lenses.mrl");
  RegexValueEnv empty;
  // Per-fixture output bound: the worst ratio of constant-lens output to
  // input length in the fixture file is 3 (l_const maps "ab" to "xyz").
  const std::size_t n = 5;
  const std::size_t n_out = 15;
  for (const auto& def : file.definitions) {
    LensPtr l = def.lens();
    LensType t = check0(l);
    auto image = enumerate_regex(t.target, empty, n_out);
    for (const auto& s : enumerate_regex(t.source, empty, n)) {
      CHECK_MESSAGE(image.count(eval(l, Direction::Get, s)) == 1, def.name,
                    ": image escaped the target language on \"", s, "\"");
    }
  }
}

TEST_CASE("evaluation agrees with the denotational oracle") {
  auto file = load_fixture("lenses.mrl");
  RegexValueEnv empty;
  LensValueEnv lens_empty;
  for (const auto& name : {"l_ren", "l_swap", "l_or", "l_link", "l_line"}) {
    LensPtr l = fixture_lens(file, name);
    LensType t = check0(l);
    auto denotation = enumerate_lens(l, lens_empty, 12);
    for (const auto& s : enumerate_regex(t.source, empty, 4)) {
      CHECK(denotation.count({s, eval(l, Direction::Get, s)}) == 1);
    }
  }
}

TEST_CASE("evaluation does not depend on the exploration order") {
  auto file = load_fixture("lenses.mrl");
  RegexValueEnv empty;
  LensTypeEnv lenv;
  RegexTypeEnv renv;
  for (const auto& def : file.definitions) {
    LensPtr l = def.lens();
    LensType t = check0(l);
    for (const auto& s : enumerate_regex(t.source, empty, 4)) {
      std::string canonical = eval(l, Direction::Get, s, lenv, renv, empty);
      CHECK(eval(l, Direction::Get, s, lenv, renv, empty, ExploreOrder::reversed()) ==
            canonical);
      CHECK(eval(l, Direction::Get, s, lenv, renv, empty, ExploreOrder::seeded(17)) ==
            canonical);
    }
  }
}
