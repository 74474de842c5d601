#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "mrlens/dsl.hpp"
#include "mrlens/lens.hpp"
#include "mrlens/mrras.hpp"
#include "mrlens/oracle.hpp"

namespace {

using namespace mrlens;

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

SourceFile load(const std::string& name) {
  return parse_source(slurp(std::string(MRLENS_FIXTURE_DIR) + "/" + name));
}

MrePtr akcak() { return load("core.mrl").find("akcak")->regex(); }

void bench_compile(benchmark::State& state) {
  MrePtr r = load("pg.mrl").find("pg_html_line_MR")->regex();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compile(r));
  }
}
BENCHMARK(bench_compile);

void bench_accept(benchmark::State& state) {
  Mrras m = compile(akcak());
  std::size_t k = static_cast<std::size_t>(state.range(0));
  std::string input = std::string(k, 'a') + "c" + std::string(k, 'a');
  for (auto _ : state) {
    benchmark::DoNotOptimize(accepts(m, input));
  }
}
BENCHMARK(bench_accept)->Arg(4)->Arg(16)->Arg(64);

void bench_reject_backtracking(benchmark::State& state) {
  Mrras m = compile(akcak());
  std::size_t k = static_cast<std::size_t>(state.range(0));
  std::string input = std::string(k, 'a') + "c" + std::string(k - 1, 'a');
  for (auto _ : state) {
    benchmark::DoNotOptimize(accepts(m, input));
  }
}
BENCHMARK(bench_reject_backtracking)->Arg(4)->Arg(16)->Arg(64);

void bench_enumerate(benchmark::State& state) {
  MrePtr r = load("corpus.mrl").find("c03")->regex();
  RegexValueEnv empty;
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_regex(r, empty, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(bench_enumerate)->Arg(6)->Arg(8);

void bench_typecheck_hyperlink_lens(benchmark::State& state) {
  LensPtr l = load("pg.mrl").find("pg_map_MR")->lens();
  for (auto _ : state) {
    benchmark::DoNotOptimize(typecheck(LensTypeEnv{}, RegexTypeEnv{}, l));
  }
}
BENCHMARK(bench_typecheck_hyperlink_lens);

void bench_gutenberg_get(benchmark::State& state) {
  LensPtr l = load("pg.mrl").find("pg_line_map_MR")->lens();
  const std::string line =
      "<a href=\"https://www.gutenberg.org/dirs/GUTINDEX.2021\">GUTINDEX.2021</a>";
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(l, Direction::Get, line));
  }
}
BENCHMARK(bench_gutenberg_get);

void bench_parse_witness(benchmark::State& state) {
  Mrras m = compile(akcak());
  std::string input = std::string(16, 'a') + "c" + std::string(16, 'a');
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_compiled(m, input));
  }
}
BENCHMARK(bench_parse_witness);

}  // namespace

BENCHMARK_MAIN();
