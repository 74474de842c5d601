#ifndef MRLENS_TESTS_TESTING_HPP
#define MRLENS_TESTS_TESTING_HPP

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gen.hpp"
#include "mrlens/dsl.hpp"
#include "mrlens/mre.hpp"

namespace mrlens::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(MRLENS_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream f(fixture_path(name), std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline SourceFile load_fixture(const std::string& name) {
  return parse_source(read_fixture(name));
}

inline MrePtr fixture_regex(const SourceFile& file, const std::string& name) {
  const Definition* def = file.find(name);
  REQUIRE(def != nullptr);
  REQUIRE(def->is_regex());
  return def->regex();
}

inline LensPtr fixture_lens(const SourceFile& file, const std::string& name) {
  const Definition* def = file.find(name);
  REQUIRE(def != nullptr);
  REQUIRE(!def->is_regex());
  return def->lens();
}

/// All strings over `alphabet` of length up to max_len.
inline std::vector<std::string> strings_up_to(const std::vector<char>& alphabet,
                                              std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    level_begin = level_end;
  }
  return out;
}

/// The ASCII characters a regex mentions, plus one fresh letter.
inline std::vector<char> alphabet_plus_fresh(const MrePtr& r) {
  auto used = chars_of(r);
  std::vector<char> out;
  for (char32_t c : used) {
    if (c < 0x80) out.push_back(static_cast<char>(c));
  }
  for (char fresh = 'z'; fresh >= 'a'; --fresh) {
    if (used.count(static_cast<char32_t>(fresh)) == 0) {
      out.push_back(fresh);
      break;
    }
  }
  return out;
}

}  // namespace mrlens::testing

#endif
