#include "mrlens/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "mrlens/errors.hpp"
#include "mrlens/unicode.hpp"

namespace mrlens {

namespace {

enum class Tok {
  Ident,
  Str,     // decoded string literal
  Class,   // character class payload
  Define,  // :=
  Semi,
  Pipe,
  Dot,
  Star,
  Tilde,
  LParen,
  RParen,
  Colon,
  Equals,
  Arrow,  // <->
  Comma,
  KwBind,
  KwIn,
  KwEps,
  KwLink,
  KwMain,
  End,
};

struct Token {
  Tok kind;
  std::string text;            // Ident / Str payload
  std::vector<char32_t> cps;   // Class payload
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

 private:
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src_[pos_];
    switch (c) {
      case ';': advance(); t.kind = Tok::Semi; return t;
      case '|': advance(); t.kind = Tok::Pipe; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case '~': advance(); t.kind = Tok::Tilde; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '=': advance(); t.kind = Tok::Equals; return t;
      case ':':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = Tok::Define;
        } else {
          t.kind = Tok::Colon;
        }
        return t;
      case '<':
        advance();
        if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
          advance();
          advance();
          t.kind = Tok::Arrow;
          return t;
        }
        throw SyntaxError("expected '<->'", t.line, t.col);
      case '"':
        t.kind = Tok::Str;
        t.text = lex_string();
        return t;
      case '[':
        t.kind = Tok::Class;
        t.cps = lex_class();
        return t;
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        name.push_back(src_[pos_]);
        advance();
      }
      if (name == "bind") t.kind = Tok::KwBind;
      else if (name == "in") t.kind = Tok::KwIn;
      else if (name == "eps") t.kind = Tok::KwEps;
      else if (name == "link") t.kind = Tok::KwLink;
      else if (name == "main") t.kind = Tok::KwMain;
      else {
        t.kind = Tok::Ident;
        t.text = std::move(name);
      }
      return t;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.col);
  }

  char32_t lex_escape() {
    if (pos_ >= src_.size()) throw SyntaxError("unfinished escape", line_, col_);
    char e = src_[pos_];
    advance();
    switch (e) {
      case '\\': return U'\\';
      case '"': return U'"';
      case 'n': return U'\n';
      case 't': return U'\t';
      case ']': return U']';
      case '-': return U'-';
      case 'u': {
        char32_t cp = 0;
        for (int k = 0; k < 4; ++k) {
          if (pos_ >= src_.size() || !std::isxdigit(static_cast<unsigned char>(src_[pos_]))) {
            throw SyntaxError("\\u expects four hex digits", line_, col_);
          }
          char h = src_[pos_];
          advance();
          cp = cp * 16 + (h <= '9' ? h - '0' : (h | 0x20) - 'a' + 10);
        }
        if (cp >= 0xD800 && cp <= 0xDFFF) {
          throw SyntaxError("surrogate code point in \\u escape", line_, col_);
        }
        return cp;
      }
      default:
        throw SyntaxError(std::string("unknown escape '\\") + e + "'", line_, col_);
    }
  }

  std::string lex_string() {
    int sl = line_, sc = col_;
    advance();  // opening quote
    std::string out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\n') break;
      if (c == '\\') {
        advance();
        append_utf8(out, lex_escape());
      } else {
        out.push_back(c);
        advance();
      }
    }
    throw SyntaxError("unterminated string literal", sl, sc);
  }

  std::vector<char32_t> lex_class() {
    int sl = line_, sc = col_;
    advance();  // '['
    std::vector<char32_t> items;
    auto read_one = [&]() -> char32_t {
      if (src_[pos_] == '\\') {
        advance();
        return lex_escape();
      }
      // Raw UTF-8 scalar.
      std::size_t start = pos_;
      unsigned char b = static_cast<unsigned char>(src_[pos_]);
      std::size_t len = b < 0x80 ? 1 : (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : 4;
      for (std::size_t k = 0; k < len && pos_ < src_.size(); ++k) advance();
      auto cps = decode_utf8(src_.substr(start, pos_ - start));
      return cps.at(0);
    };
    while (pos_ < src_.size() && src_[pos_] != ']') {
      if (src_[pos_] == '\n') break;
      char32_t lo = read_one();
      if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] != ']') {
        advance();  // '-'
        char32_t hi = read_one();
        if (hi < lo) throw SyntaxError("character range is reversed", sl, sc);
        for (char32_t c = lo; c <= hi; ++c) items.push_back(c);
      } else {
        items.push_back(lo);
      }
    }
    if (pos_ >= src_.size() || src_[pos_] != ']') {
      throw SyntaxError("unterminated character class", sl, sc);
    }
    advance();  // ']'
    if (items.empty()) throw SyntaxError("empty character class", sl, sc);
    return items;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  SourceFile source_file() {
    SourceFile out;
    bool have_main = false;
    while (!at(Tok::End)) {
      Definition def;
      if (at(Tok::KwMain)) {
        eat();
        if (have_main) throw err("more than one definition marked main");
        have_main = true;
        def.is_main = true;
      }
      def.name = expect_ident("definition name");
      if (find_def(def.name)) throw err("duplicate definition '" + def.name + "'");
      expect(Tok::Define, "':='");
      def.value = expression();
      expect(Tok::Semi, "';'");
      defs_.push_back(std::move(def));
      out.definitions.push_back(defs_.back());
    }
    return out;
  }

  MrePtr single_regex() {
    MrePtr r = regex_alt();
    expect(Tok::End, "end of input");
    return r;
  }

  LensPtr single_lens() {
    LensPtr l = lens_comp();
    expect(Tok::End, "end of input");
    return l;
  }

 private:
  // ----- definitions -----

  // A definition body is a regex or a lens; try the regex grammar first and
  // fall back to the lens grammar, reporting whichever error got further.
  std::variant<MrePtr, LensPtr> expression() {
    std::size_t start = pos_;
    try {
      MrePtr r = regex_alt();
      if (!at(Tok::Semi)) throw err("expected ';'");
      return r;
    } catch (const SyntaxError& regex_err) {
      std::size_t regex_stop = pos_;
      pos_ = start;
      try {
        LensPtr l = lens_comp();
        if (!at(Tok::Semi)) throw err("expected ';'");
        return l;
      } catch (const SyntaxError& lens_err) {
        if (regex_stop > pos_) throw regex_err;
        throw;
      }
    }
  }

  const Definition* find_def(std::string_view name) const {
    for (const auto& d : defs_) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  // ----- regex grammar -----

  MrePtr regex_alt() {
    MrePtr r = regex_concat();
    while (at(Tok::Pipe)) {
      eat();
      r = Mre::alt(std::move(r), regex_concat());
    }
    return r;
  }

  MrePtr regex_concat() {
    MrePtr r = regex_postfix();
    while (at(Tok::Dot)) {
      eat();
      r = Mre::concat(std::move(r), regex_postfix());
    }
    return r;
  }

  MrePtr regex_postfix() {
    MrePtr r = regex_atom();
    while (at(Tok::Star)) {
      eat();
      r = Mre::star(std::move(r));
    }
    return r;
  }

  MrePtr regex_atom() {
    switch (peek().kind) {
      case Tok::Str: {
        std::string s = eat().text;
        return Mre::literal(s);
      }
      case Tok::Class: {
        std::vector<char32_t> cps = eat().cps;
        MrePtr r = Mre::chr(cps.back());
        for (std::size_t i = cps.size() - 1; i-- > 0;) {
          r = Mre::alt(Mre::chr(cps[i]), std::move(r));
        }
        return r;
      }
      case Tok::KwEps:
        eat();
        return Mre::epsilon();
      case Tok::LParen: {
        eat();
        MrePtr r = regex_alt();
        expect(Tok::RParen, "')'");
        return r;
      }
      case Tok::KwBind: {
        eat();
        std::string name = expect_ident("bound variable name");
        expect(Tok::Colon, "':'");
        MrePtr def = regex_alt();
        expect(Tok::KwIn, "'in'");
        regex_scope_.push_back(name);
        MrePtr body = regex_alt();
        regex_scope_.pop_back();
        return Mre::bind(std::move(name), std::move(def), std::move(body));
      }
      case Tok::Ident: {
        std::string name = eat().text;
        if (std::find(regex_scope_.rbegin(), regex_scope_.rend(), name) != regex_scope_.rend()) {
          return Mre::var(std::move(name));
        }
        if (const Definition* d = find_def(name)) {
          if (!d->is_regex()) throw err("'" + name + "' names a lens, not a regex");
          return d->regex();
        }
        return Mre::var(std::move(name));  // free variable
      }
      default:
        throw err("expected a regex");
    }
  }

  // ----- lens grammar -----

  LensPtr lens_comp() {
    LensPtr l = lens_or();
    while (at_comp_op()) {
      eat();
      l = Lens::comp(std::move(l), lens_or());
    }
    return l;
  }

  bool at_comp_op() {
    // ';' terminates definitions, so composition uses it only inside
    // parentheses or link parts; a following definition would start with an
    // identifier + ':='. Composition is only taken when what follows can
    // begin a lens.
    if (!at(Tok::Semi)) return false;
    Tok after = toks_[pos_ + 1].kind;
    switch (after) {
      case Tok::Str:
      case Tok::LParen:
      case Tok::KwLink:
        return true;
      case Tok::Ident:
        return toks_[pos_ + 2].kind != Tok::Define;
      default:
        return false;
    }
  }

  LensPtr lens_or() {
    LensPtr l = lens_cat();
    while (at(Tok::Pipe)) {
      eat();
      l = Lens::alt(std::move(l), lens_cat());
    }
    return l;
  }

  LensPtr lens_cat() {
    LensPtr l = lens_postfix();
    for (;;) {
      if (at(Tok::Dot)) {
        eat();
        l = Lens::concat(std::move(l), lens_postfix());
      } else if (at(Tok::Tilde)) {
        eat();
        l = Lens::swap(std::move(l), lens_postfix());
      } else {
        return l;
      }
    }
  }

  LensPtr lens_postfix() {
    LensPtr l = lens_atom();
    while (at(Tok::Star)) {
      eat();
      l = Lens::iter(std::move(l));
    }
    return l;
  }

  LensPtr lens_atom() {
    switch (peek().kind) {
      case Tok::Str: {
        std::string s1 = eat().text;
        expect(Tok::Arrow, "'<->'");
        std::string s2 = expect_str("constant lens right-hand string");
        return Lens::constant(std::move(s1), std::move(s2));
      }
      case Tok::LParen: {
        eat();
        LensPtr l = lens_comp();
        expect(Tok::RParen, "')'");
        return l;
      }
      case Tok::KwLink: {
        eat();
        std::string name = expect_ident("linked lens variable name");
        expect(Tok::Equals, "'='");
        LensPtr def = lens_comp();
        expect(Tok::KwIn, "'in'");
        lens_scope_.push_back(name);
        LensPtr body = lens_comp();
        lens_scope_.pop_back();
        return Lens::link(std::move(name), std::move(def), std::move(body));
      }
      case Tok::Ident: {
        // Soft keywords: const(...) and id(...).
        if (peek().text == "const" && toks_[pos_ + 1].kind == Tok::LParen) {
          eat();
          eat();
          std::string s1 = expect_str("constant lens left-hand string");
          expect(Tok::Comma, "','");
          std::string s2 = expect_str("constant lens right-hand string");
          expect(Tok::RParen, "')'");
          return Lens::constant(std::move(s1), std::move(s2));
        }
        if (peek().text == "id" && toks_[pos_ + 1].kind == Tok::LParen) {
          eat();
          eat();
          MrePtr r = regex_alt();
          expect(Tok::RParen, "')'");
          return Lens::id(std::move(r));
        }
        std::string name = eat().text;
        if (std::find(lens_scope_.rbegin(), lens_scope_.rend(), name) != lens_scope_.rend()) {
          return Lens::var(std::move(name));
        }
        if (const Definition* d = find_def(name)) {
          if (d->is_regex()) throw err("'" + name + "' names a regex, not a lens");
          return d->lens();
        }
        return Lens::var(std::move(name));  // free lens variable
      }
      default:
        throw err("expected a lens");
    }
  }

  // ----- token plumbing -----

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return toks_[pos_].kind == k; }

  Token eat() { return toks_[pos_++]; }

  void expect(Tok k, const std::string& what) {
    if (!at(k)) throw err("expected " + what);
    eat();
  }

  std::string expect_ident(const std::string& what) {
    if (!at(Tok::Ident)) throw err("expected " + what);
    return eat().text;
  }

  std::string expect_str(const std::string& what) {
    if (!at(Tok::Str)) throw err("expected " + what);
    return eat().text;
  }

  SyntaxError err(const std::string& msg) const {
    return SyntaxError(msg, peek().line, peek().col);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Definition> defs_;
  std::vector<std::string> regex_scope_;
  std::vector<std::string> lens_scope_;
};

}  // namespace

const Definition* SourceFile::find(std::string_view name) const {
  for (const auto& d : definitions) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const Definition* SourceFile::main() const {
  for (const auto& d : definitions) {
    if (d.is_main) return &d;
  }
  return nullptr;
}

SourceFile parse_source(std::string_view text) { return Parser(text).source_file(); }

MrePtr parse_regex(std::string_view text) { return Parser(text).single_regex(); }

LensPtr parse_lens(std::string_view text) { return Parser(text).single_lens(); }

// ---------------------------------------------------------------------------
// Printers
// ---------------------------------------------------------------------------

namespace {

void escape_into(std::string& out, const std::string& s) {
  for (char32_t cp : decode_utf8(s)) {
    switch (cp) {
      case U'\\': out += "\\\\"; break;
      case U'"': out += "\\\""; break;
      case U'\n': out += "\\n"; break;
      case U'\t': out += "\\t"; break;
      default:
        if (cp < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(cp));
          out += buf;
        } else {
          append_utf8(out, cp);
        }
    }
  }
}

std::string quoted_literal(const std::string& s) {
  std::string out = "\"";
  escape_into(out, s);
  out.push_back('"');
  return out;
}

// Maximal right-leaning constant chain, printable as one string literal.
std::optional<std::string> literal_chain(const MrePtr& r) {
  if (r->kind() == MreKind::Const) return encode_utf8(r->ch());
  if (r->kind() == MreKind::Concat && r->left()->kind() == MreKind::Const) {
    if (auto rest = literal_chain(r->right())) return encode_utf8(r->left()->ch()) + *rest;
  }
  return std::nullopt;
}

// Precedence levels: alternation 0, concatenation 1, star 2, atom 3. A bind
// prints bare only in tail position at the lowest level; anywhere else its
// greedy body would swallow the following operators.
std::string print_r(const MrePtr& r, int min_level, bool tail) {
  auto parens = [](const std::string& s) { return "(" + s + ")"; };
  if (auto lit = literal_chain(r)) return quoted_literal(*lit);
  switch (r->kind()) {
    case MreKind::Epsilon:
      return "eps";
    case MreKind::Const:
      return quoted_literal(encode_utf8(r->ch()));  // unreachable, kept for safety
    case MreKind::Var:
      return r->name();
    case MreKind::Star: {
      std::string s = print_r(r->inner(), 2, false) + "*";
      return min_level <= 2 ? s : parens(s);
    }
    case MreKind::Alt: {
      std::string s = print_r(r->left(), 0, false) + " | " + print_r(r->right(), 1, tail);
      return min_level <= 0 ? s : parens(s);
    }
    case MreKind::Concat: {
      std::string s = print_r(r->left(), 1, false) + " . " + print_r(r->right(), 2, tail);
      return min_level <= 1 ? s : parens(s);
    }
    case MreKind::Bind: {
      std::string s = "bind " + r->name() + " : " + print_r(r->def(), 0, true) + " in " +
                      print_r(r->body(), 0, true);
      return (tail && min_level <= 0) ? s : parens(s);
    }
  }
  return "?";
}

// Lens levels: composition 0, alternation 1, concat/swap 2, star 3, atom 4.
// The constant lens prints as its arrow sugar just below atom level.
std::string print_l(const LensPtr& l, int min_level, bool tail) {
  auto parens = [](const std::string& s) { return "(" + s + ")"; };
  switch (l->kind()) {
    case LensKind::Const: {
      std::string s = quoted_literal(l->s1()) + " <-> " + quoted_literal(l->s2());
      return min_level <= 3 ? s : parens(s);
    }
    case LensKind::Id:
      return "id(" + print_r(l->regex(), 0, true) + ")";
    case LensKind::Var:
      return l->name();
    case LensKind::Iter: {
      std::string s = print_l(l->inner(), 4, false) + "*";
      return min_level <= 3 ? s : parens(s);
    }
    case LensKind::Concat:
    case LensKind::Swap: {
      const char* op = l->kind() == LensKind::Concat ? " . " : " ~ ";
      std::string s = print_l(l->left(), 2, false) + op + print_l(l->right(), 3, tail);
      return min_level <= 2 ? s : parens(s);
    }
    case LensKind::Or: {
      std::string s = print_l(l->left(), 1, false) + " | " + print_l(l->right(), 2, tail);
      return min_level <= 1 ? s : parens(s);
    }
    case LensKind::Comp: {
      std::string s = print_l(l->left(), 0, false) + " ; " + print_l(l->right(), 1, tail);
      return min_level <= 0 ? s : parens(s);
    }
    case LensKind::Link: {
      std::string s = "link " + l->name() + " = " + print_l(l->def(), 0, true) + " in " +
                      print_l(l->body(), 0, true);
      return (tail && min_level <= 0) ? s : parens(s);
    }
  }
  return "?";
}

}  // namespace

std::string print_regex(const MrePtr& r) { return print_r(r, 0, true); }

std::string print_lens(const LensPtr& l) { return print_l(l, 0, true); }

}  // namespace mrlens
