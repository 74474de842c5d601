#include "mrlens/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mrlens/ambiguity.hpp"
#include "mrlens/dsl.hpp"
#include "mrlens/emit.hpp"
#include "mrlens/errors.hpp"
#include "mrlens/lens.hpp"
#include "mrlens/mrras.hpp"
#include "mrlens/oracle.hpp"

namespace mrlens {

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kError = 2;

std::string slurp_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("file-not-found", "cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string slurp_stream(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Definition& lookup(const SourceFile& file, const std::string& name) {
  const Definition* def = name.empty() ? file.main() : file.find(name);
  if (!def) {
    throw Error("unknown-definition",
                name.empty() ? "no definition is marked main" : "no definition named " + name);
  }
  return *def;
}

MrePtr regex_def(const SourceFile& file, const std::string& name) {
  const Definition& def = lookup(file, name);
  if (!def.is_regex()) {
    throw Error("not-a-regex", "definition " + def.name + " is a lens, not a regex");
  }
  return def.regex();
}

LensPtr lens_def(const SourceFile& file, const std::string& name) {
  const Definition& def = lookup(file, name);
  if (def.is_regex()) {
    throw Error("not-a-lens", "definition " + def.name + " is a regex, not a lens");
  }
  return def.lens();
}

std::size_t default_oracle_bound() {
  if (const char* env = std::getenv("MRL_ORACLE_BOUND")) {
    return static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
  }
  return 6;
}

int cmd_match(const std::string& file, const std::string& name,
              const std::optional<std::string>& input_arg, bool explain, std::istream& in,
              std::ostream& out, std::ostream& err) {
  SourceFile source = parse_source(slurp_file(file));
  MrePtr r = regex_def(source, name);
  std::string input;
  if (input_arg) {
    input = *input_arg;
  } else {
    input = slurp_stream(in);
    if (!input.empty() && input.back() == '\n') input.pop_back();
  }
  Mrras m = compile(r);
  auto witness = match_witness(m, input);
  if (!witness) {
    err << "no match" << '\n';
    return kRejected;
  }
  if (explain) {
    bool first = true;
    for (StepRule rule : rule_summary(*witness)) {
      out << (first ? "" : " ") << step_rule_name(rule);
      first = false;
    }
    out << '\n';
  }
  return kOk;
}

int cmd_check(const std::string& file, const std::string& name, std::size_t amb_bound,
              bool explain, std::ostream& out, std::ostream& err) {
  SourceFile source = parse_source(slurp_file(file));
  LensPtr l = lens_def(source, name);
  try {
    LensType type = typecheck(LensTypeEnv{}, RegexTypeEnv{}, l, amb_bound);
    out << "source: " << print_regex(type.source) << '\n';
    out << "target: " << print_regex(type.target) << '\n';
    return kOk;
  } catch (const TypeError& e) {
    err << "type error [" << e.code() << "]";
    if (!e.rule().empty()) err << " in rule " << e.rule();
    // --explain adds the full side-condition diagnostic with any witness
    // strings the oracle found.
    if (explain) err << ": " << e.what();
    err << '\n';
    return kRejected;
  }
}

int apply_lens(const std::string& file, const std::string& name, Direction dir, bool lines,
               std::istream& in, std::ostream& out, std::ostream& err) {
  SourceFile source = parse_source(slurp_file(file));
  LensPtr l = lens_def(source, name);
  std::string input = slurp_stream(in);
  try {
    if (!lines) {
      out << eval(l, dir, input);
      return kOk;
    }
    // Per-line application: strip each newline and put it back, preserving
    // the presence or absence of a final newline.
    std::size_t start = 0;
    while (start < input.size()) {
      std::size_t nl = input.find('\n', start);
      std::string line =
          nl == std::string::npos ? input.substr(start) : input.substr(start, nl - start);
      out << eval(l, dir, line);
      if (nl == std::string::npos) break;
      out << '\n';
      start = nl + 1;
    }
    return kOk;
  } catch (const ParseFailure& e) {
    err << "parse failure at byte " << e.position() << ": " << e.what() << '\n';
    return kRejected;
  }
}

int cmd_compile(const std::string& file, const std::string& name, const std::string& emit,
                std::ostream& out) {
  SourceFile source = parse_source(slurp_file(file));
  MrePtr r = regex_def(source, name);
  if (emit == "sre") {
    out << sre_to_json(vars_to_indices(mre_to_sre(alpha_rename(r)))) << '\n';
    return kOk;
  }
  Mrras m = compile(r);
  if (emit == "mrras") {
    out << mrras_to_json(m) << '\n';
  } else if (emit == "dot") {
    out << mrras_to_dot(m);
  } else {
    throw Error("bad-emit", "unknown emit format: " + emit);
  }
  return kOk;
}

int cmd_oracle(const std::string& file, const std::string& name, std::size_t max_len,
               std::ostream& out) {
  SourceFile source = parse_source(slurp_file(file));
  MrePtr r = regex_def(source, name);
  auto language = enumerate_regex(r, RegexValueEnv{}, max_len);
  std::vector<std::string> sorted(language.begin(), language.end());
  std::sort(sorted.begin(), sorted.end(), LengthLexLess{});
  for (const auto& s : sorted) {
    out << (s.empty() ? std::string("<eps>") : s) << '\n';
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"match-reference regexes and bijective lenses"};
  app.name("mrl");
  app.require_subcommand(1);

  std::string file, name, input_str, emit = "mrras";
  bool explain = false, lines = false;
  std::size_t max_len = default_oracle_bound();
  std::size_t amb_bound = kDefaultAmbBound;
  bool have_input = false;

  auto* match = app.add_subcommand("match", "decide whether a string matches a regex");
  match->add_option("file", file, "definitions file")->required();
  match->add_option("name", name, "regex definition name")->required();
  auto* input_opt = match->add_option("input", input_str, "input string (default: stdin)");
  match->add_flag("--explain", explain, "print the accepting rule sequence");

  auto* check = app.add_subcommand("check", "type-check a lens and print its type");
  check->add_option("file", file, "definitions file")->required();
  check->add_option("name", name, "lens definition name")->required();
  check->add_option("--amb-bound", amb_bound, "oracle confirmation bound");
  check->add_flag("--explain", explain, "include side-condition diagnostics and witnesses");

  auto* get = app.add_subcommand("get", "apply a lens source-to-target (stdin to stdout)");
  get->add_option("file", file, "definitions file")->required();
  get->add_option("name", name, "lens definition name")->required();
  get->add_flag("--lines", lines, "apply the lens to each input line");

  auto* put = app.add_subcommand("put", "apply a lens target-to-source (stdin to stdout)");
  put->add_option("file", file, "definitions file")->required();
  put->add_option("name", name, "lens definition name")->required();
  put->add_flag("--lines", lines, "apply the lens to each input line");

  auto* compile_cmd = app.add_subcommand("compile", "emit the compiled form of a regex");
  compile_cmd->add_option("file", file, "definitions file")->required();
  compile_cmd->add_option("name", name, "regex definition name")->required();
  compile_cmd->add_option("--emit", emit, "sre | mrras | dot")
      ->check(CLI::IsMember({"sre", "mrras", "dot"}));

  auto* oracle_cmd = app.add_subcommand("oracle", "enumerate a regex's bounded language");
  oracle_cmd->add_option("file", file, "definitions file")->required();
  oracle_cmd->add_option("name", name, "regex definition name")->required();
  oracle_cmd->add_option("--max-len", max_len, "length bound");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kError;
  }
  have_input = input_opt->count() > 0;

  try {
    if (app.got_subcommand(match)) {
      return cmd_match(file, name,
                       have_input ? std::optional<std::string>(input_str) : std::nullopt,
                       explain, in, out, err);
    }
    if (app.got_subcommand(check)) return cmd_check(file, name, amb_bound, explain, out, err);
    if (app.got_subcommand(get)) return apply_lens(file, name, Direction::Get, lines, in, out, err);
    if (app.got_subcommand(put)) return apply_lens(file, name, Direction::Put, lines, in, out, err);
    if (app.got_subcommand(compile_cmd)) return cmd_compile(file, name, emit, out);
    if (app.got_subcommand(oracle_cmd)) return cmd_oracle(file, name, max_len, out);
  } catch (const SyntaxError& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return kError;
  } catch (const ParseFailure& e) {
    err << "error [" << e.code() << "] at byte " << e.position() << ": " << e.what() << '\n';
    return kRejected;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace mrlens
