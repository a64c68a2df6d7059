#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poistest/config.hpp"
#include "poistest/gof.hpp"
#include "poistest/mc.hpp"
#include "poistest/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Whitespace-separated nonnegative integers; reports line/column on bad tokens.
std::vector<long> read_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open data file '" + path + "'");
  std::vector<long> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    while (pos < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[pos]))) { ++pos; continue; }
      std::size_t start = pos;
      while (pos < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[pos])))
        ++pos;
      std::string tok = line.substr(start, pos - start);
      std::size_t used = 0;
      long v = 0;
      bool ok = true;
      try {
        v = std::stol(tok, &used);
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok || used != tok.size() || v < 0)
        throw InputError("input error at line " + std::to_string(line_no) +
                         ", column " + std::to_string(start + 1) +
                         ": expected a nonnegative integer, got '" + tok + "'");
      values.push_back(v);
    }
  }
  if (values.empty()) throw InputError("input error: data file is empty");
  return values;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + out_path + "'");
  out << text;
}

int cmd_test(const std::string& data_path, const std::string& method,
             unsigned k, double alpha) {
  auto values = read_counts(data_path);
  poistest::CountSample sample(std::move(values));

  poistest::TestMethod tm;
  if (method == "Z")
    tm = {poistest::Method::Zk, k};
  else
    tm = poistest::TestMethod::parse(method);

  poistest::TestResult r = poistest::apply_test(tm, sample, alpha);
  std::printf("method: %s\n", tm.name().c_str());
  std::printf("n: %zu\n", sample.size());
  std::printf("statistic: %.6g\n", r.statistic);
  std::printf("k_used: %u\n", r.k_used);
  std::printf("p_value: %.6g\n", r.p_value);
  std::printf("alpha: %g\n", r.alpha);
  std::printf("decision: %s\n", r.reject ? "reject" : "fail-to-reject");
  if (r.degenerate) std::printf("degenerate: true\n");
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 int threads, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> reps,
                 std::optional<double> alpha) {
  poistest::SimConfig cfg;
  try {
    cfg = poistest::parse_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (reps) cfg.reps = *reps;
    if (alpha) cfg.alpha = *alpha;
    if (cfg.reps < 1) throw std::invalid_argument("reps must be >= 1");
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  write_output(out_path, poistest::run_config_csv(cfg, threads));
  return kExitOk;
}

int cmd_bounds(const std::string& spec_text, unsigned k_min, unsigned k_max,
               const std::string& out_path) {
  poistest::DistSpec spec;
  try {
    spec = poistest::parse_spec(spec_text);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (k_max < k_min) throw InputError("--k-max must be >= --k-min");

  auto sign = poistest::membership_check(spec, 2001);
  std::string csv =
      "spec,k,mu,t_abs_k,l1,lower,upper,sign_class,holds\n";
  bool violated = false;
  for (unsigned k = k_min; k <= k_max; ++k) {
    auto r = poistest::check_bounds(spec, k);
    char buf[256];
    std::snprintf(buf, sizeof(buf), ",%u,%.6g,%.6g,%.6g,%.6g,%.6g,%s,%s\n", k,
                  r.mu, r.t_abs_k, r.l1, r.lower, r.upper,
                  poistest::sign_class_name(sign.cls),
                  r.holds ? "true" : "false");
    csv += "\"" + poistest::spec_string(spec) + "\"" + buf;
    if (sign.cls != poistest::SignClass::MixedSign && !r.holds) violated = true;
  }
  write_output(out_path, csv);
  return violated ? kExitInternal : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poissonity goodness-of-fit tests and Monte Carlo studies"};
  app.require_subcommand(1);

  // test
  std::string data_path, method = "W";
  unsigned k = 0;
  double alpha = 0.05;
  auto* test = app.add_subcommand("test", "run one test on a data file");
  test->add_option("data", data_path, "whitespace-separated counts")->required();
  test->add_option("--method", method, "W, ID, Z (with --k) or Zk");
  test->add_option("--k", k, "statistic index for method Z");
  test->add_option("--alpha", alpha, "nominal level");

  // simulate
  std::string config_path, out_path;
  int threads = 0;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> reps_override;
  std::optional<double> alpha_override;
  auto* simulate = app.add_subcommand("simulate", "run a simulation config");
  simulate->add_option("config", config_path, "simulation config file")->required();
  simulate->add_option("--out", out_path, "CSV output path (default stdout)");
  simulate
      ->add_option("--threads", threads,
                   "worker threads (0 = runtime default, honors "
                   "OMP_NUM_THREADS)")
      ->envname("POISTEST_THREADS");
  simulate->add_option("--seed", seed_override, "override the config seed");
  simulate->add_option("--reps", reps_override, "override replication count");
  simulate->add_option("--alpha", alpha_override, "override nominal level");

  // bounds
  std::string spec_text, bounds_out;
  unsigned k_min = 0, k_max = 3;
  auto* bounds = app.add_subcommand("bounds", "pgf L1 bound diagnostics");
  bounds->add_option("spec", spec_text, "distribution spec, family:p1,p2,...")
      ->required();
  bounds->add_option("--k-min", k_min, "smallest k");
  bounds->add_option("--k-max", k_max, "largest k");
  bounds->add_option("--out", bounds_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (test->parsed()) return cmd_test(data_path, method, k, alpha);
    if (simulate->parsed())
      return cmd_simulate(config_path, out_path, threads, seed_override,
                          reps_override, alpha_override);
    if (bounds->parsed()) return cmd_bounds(spec_text, k_min, k_max, bounds_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
