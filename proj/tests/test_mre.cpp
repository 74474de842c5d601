#include <doctest.h>

#include "mrlens/oracle.hpp"
#include "testing.hpp"

using namespace mrlens;
using namespace mrlens::testing;

TEST_CASE("free variables respect binder scope") {
  CHECK(free_vars(Mre::chr(U'a')).empty());

  MrePtr closed = parse_regex("bind x : \"a\"* in x . \"b\" . x");
  CHECK(free_vars(closed).empty());
  CHECK(is_closed(closed));

  // The naive back-reference translation leaves the trailing x free.
  MrePtr naive = parse_regex("(bind x : \"a\"* in x . \"b\" . x)* . \"c\" . x");
  CHECK(free_vars(naive) == std::set<std::string>{"x"});
  CHECK_FALSE(is_closed(naive));

  // The definition position is outside the binder's scope.
  MrePtr def_use = Mre::bind("x", Mre::var("x"), Mre::var("x"));
  CHECK(free_vars(def_use) == std::set<std::string>{"x"});
}

TEST_CASE("closedness of the hyperlink fixture") {
  auto file = load_fixture("pg.mrl");
  CHECK(is_closed(fixture_regex(file, "pg_html_line_MR")));
  CHECK_FALSE(is_closed(Mre::var("x")));
}

TEST_CASE("alpha renaming freshens every binder deterministically") {
  MrePtr two = Mre::concat(Mre::bind("x", Mre::star(Mre::chr(U'a')), Mre::var("x")),
                           Mre::bind("x", Mre::star(Mre::chr(U'b')), Mre::var("x")));
  MrePtr renamed = alpha_rename(two);
  MrePtr expected =
      Mre::concat(Mre::bind("x$0", Mre::star(Mre::chr(U'a')), Mre::var("x$0")),
                  Mre::bind("x$1", Mre::star(Mre::chr(U'b')), Mre::var("x$1")));
  CHECK(structurally_equal(renamed, expected));

  RegexValueEnv empty;
  for (std::size_t n = 0; n <= 6; ++n) {
    CHECK(enumerate_regex(two, empty, n) == enumerate_regex(renamed, empty, n));
  }

  CHECK(structurally_equal(alpha_rename(Mre::chr(U'a')), Mre::chr(U'a')));

  MrePtr one = parse_regex("bind x : \"a\"* in x . \"b\" . x");
  CHECK(structurally_equal(alpha_rename(one), parse_regex("bind q : \"a\"* in q . \"b\" . q"))
        == false);
  CHECK(alpha_equivalent(alpha_rename(one), one));
}

TEST_CASE("alpha renaming avoids reserved names") {
  std::set<std::string> avoid{"x$0"};
  MrePtr one = parse_regex("bind x : \"a\" in x");
  MrePtr renamed = alpha_rename(one, avoid);
  CHECK(structurally_equal(renamed, Mre::bind("x$1", Mre::chr(U'a'), Mre::var("x$1"))));
}

TEST_CASE("alpha renaming preserves free variables") {
  Gen gen(99);
  for (int i = 0; i < 60; ++i) {
    std::vector<std::string> scope{"outer"};
    MrePtr r = gen.regex(3, scope);
    CHECK(free_vars(alpha_rename(r)) == free_vars(r));
  }
}

TEST_CASE("alpha renaming preserves the bounded language of closed expressions") {
  Gen gen(431);
  RegexValueEnv empty;
  for (int i = 0; i < 30; ++i) {
    MrePtr r = gen.closed_regex(3);
    for (std::size_t n = 0; n <= 6; n += 3) {
      CHECK(enumerate_regex(r, empty, n) == enumerate_regex(alpha_rename(r), empty, n));
    }
  }
}

TEST_CASE("regex type environment judgments") {
  RegexTypeEnv empty;
  CHECK(rtenv_good_for(empty, Mre::chr(U'a')));
  CHECK(rtenv_good_for(empty.extended("x", Mre::star(Mre::chr(U'a'))), Mre::var("x")));
  CHECK_FALSE(rtenv_good_for(empty, Mre::var("x")));

  CHECK(rtenv_well_formed(empty));
  RegexTypeEnv ordered = empty.extended("x", Mre::star(Mre::chr(U'a')))
                             .extended("y", Mre::concat(Mre::var("x"), Mre::chr(U'b')));
  CHECK(rtenv_well_formed(ordered));
  RegexTypeEnv dangling =
      empty.extended("y", Mre::concat(Mre::var("x"), Mre::chr(U'b')));
  CHECK_FALSE(rtenv_well_formed(dangling));
  RegexTypeEnv dup =
      empty.extended("x", Mre::chr(U'a')).extended("x", Mre::chr(U'b'));
  CHECK_FALSE(rtenv_well_formed(dup));
}

TEST_CASE("paired environment well-formedness") {
  LensTypeEnv lempty;
  RegexTypeEnv rempty;
  CHECK(envs_well_formed(lempty, rempty));

  LensTypeEnv lenv = lempty.extended("y", "x1", "x2");
  RegexTypeEnv renv = rempty.extended("x1", Mre::star(Mre::chr(U'a')))
                          .extended("x2", Mre::star(Mre::chr(U'b')));
  CHECK(envs_well_formed(lenv, renv));

  CHECK_FALSE(envs_well_formed(lenv, rempty.extended("x1", Mre::star(Mre::chr(U'a')))));
  CHECK_FALSE(envs_well_formed(lempty, renv));
}

TEST_CASE("well-formed pair implies well-formed regex environment") {
  Gen gen(3);
  LensTypeEnv lenv;
  RegexTypeEnv renv;
  for (int i = 0; i < 4; ++i) {
    lenv = lenv.extended("y" + std::to_string(i), "a" + std::to_string(i),
                         "b" + std::to_string(i));
    renv = renv.extended("a" + std::to_string(i), gen.closed_regex(2))
               .extended("b" + std::to_string(i), gen.closed_regex(2));
    CHECK(envs_well_formed(lenv, renv));
    CHECK(rtenv_well_formed(renv));
  }
}

TEST_CASE("value environments consistent with their types") {
  RegexTypeEnv tempty;
  RegexValueEnv vempty;
  CHECK(renv_consistent(tempty, vempty));

  RegexTypeEnv tenv = tempty.extended("x", Mre::star(Mre::chr(U'a')));
  CHECK(renv_consistent(tenv, vempty.extended("x", "aa")));
  CHECK_FALSE(renv_consistent(tenv, vempty.extended("x", "ab")));

  // A later type may mention an earlier variable.
  RegexTypeEnv chained = tenv.extended("y", Mre::concat(Mre::var("x"), Mre::chr(U'b')));
  CHECK(renv_consistent(chained, vempty.extended("x", "aa").extended("y", "aab")));
  CHECK_FALSE(renv_consistent(chained, vempty.extended("x", "aa").extended("y", "ab")));
}

TEST_CASE("value substitution closes an open expression") {
  MrePtr open = parse_regex("x . \"c\" . x");
  RegexValueEnv venv = RegexValueEnv{}.extended("x", "ab");
  MrePtr closed = substitute_values(open, venv);
  CHECK(is_closed(closed));
  RegexValueEnv empty;
  CHECK(enumerate_regex(closed, empty, 5) == std::set<std::string>{"abcab"});
}
