#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "thingc/export.hpp"
#include "thingc/parser.hpp"
#include "thingc/simulator.hpp"
#include "thingc/validator.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

thingc::ModelDocument load(const std::string& name) {
  std::string path = std::string(THINGC_MODELS_DIR) + "/" + name;
  thingc::ParseResult result = thingc::parse(read_file(path), path);
  if (!result.ok()) throw std::runtime_error("cannot load " + path);
  return std::move(*result.document);
}

std::vector<thingc::Thing> bits(unsigned value, int n) {
  std::vector<thingc::Thing> out;
  for (int i = n - 1; i >= 0; --i) out.push_back(thingc::Thing::integer((value >> i) & 1));
  return out;
}

void BM_ParseRestaurant(benchmark::State& state) {
  std::string source = read_file(std::string(THINGC_MODELS_DIR) + "/restaurant.tm");
  for (auto _ : state) {
    thingc::ParseResult result = thingc::parse(source, "restaurant.tm");
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_ParseRestaurant);

void BM_ValidateRestaurant(benchmark::State& state) {
  thingc::ModelDocument doc = load("restaurant.tm");
  for (auto _ : state) {
    auto report = thingc::validate_structure(doc.model);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_ValidateRestaurant);

void BM_SimulatePalindrome(benchmark::State& state) {
  thingc::ModelDocument doc = load("palindrome.tm");
  int n = static_cast<int>(state.range(0));
  std::vector<thingc::InputFeed> feeds{{doc.inputs[0].stage, bits(0x5A, n)}};
  for (auto _ : state) {
    thingc::Trace trace = thingc::execute(doc.model, feeds, {});
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_SimulatePalindrome)->Arg(4)->Arg(8);

void BM_SimulateTrafficCycles(benchmark::State& state) {
  thingc::ModelDocument doc = load("traffic_light.tm");
  thingc::SimulationLimits limits;
  limits.max_clock = 165 * state.range(0);
  for (auto _ : state) {
    thingc::Trace trace = thingc::execute(doc.model, {}, limits);
    benchmark::DoNotOptimize(trace);
  }
}
BENCHMARK(BM_SimulateTrafficCycles)->Arg(2)->Arg(64);

void BM_ExportTraceJsonl(benchmark::State& state) {
  thingc::ModelDocument doc = load("example1_ten_integers.tm");
  std::vector<thingc::InputFeed> feeds{{doc.inputs[0].stage, doc.inputs[0].things}};
  thingc::Trace trace = thingc::execute(doc.model, feeds, {});
  for (auto _ : state) {
    std::string out = thingc::export_trace(doc.model, trace, thingc::TraceFormat::Jsonl);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ExportTraceJsonl);

}  // namespace

BENCHMARK_MAIN();
