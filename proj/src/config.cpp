#include "poistest/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace poistest {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string::npos
                                         ? std::string::npos
                                         : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(line, "bad number '" + s + "'");
  }
  if (used != s.size()) fail(line, "bad number '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s, int line) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    fail(line, "bad integer '" + s + "'");
  }
  if (used != s.size()) fail(line, "bad integer '" + s + "'");
  return v;
}

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits a canonical spec string into the CSV family/params columns so
// that family + ":" + params re-parses to the identical spec.
void split_spec(const DistSpec& spec, std::string& family, std::string& params) {
  std::string s = spec_string(spec);
  std::size_t cut = spec.family == Family::ZeroInflated
                        ? s.rfind(':')
                        : s.find(':');
  family = s.substr(0, cut);
  params = s.substr(cut + 1);
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  ScenarioBlock* block = nullptr;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line == "[scenario]") {
      cfg.scenarios.emplace_back();
      block = &cfg.scenarios.back();
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(line_no, "empty value for '" + key + "'");

    if (!block) {
      if (key == "alpha") cfg.alpha = to_double(value, line_no);
      else if (key == "reps") cfg.reps = to_u64(value, line_no);
      else if (key == "seed") cfg.seed = to_u64(value, line_no);
      else fail(line_no, "unknown top-level key '" + key + "'");
      continue;
    }

    if (key == "id") {
      block->id = value;
    } else if (key == "type") {
      if (value == "power") block->type = ScenarioBlock::Type::Power;
      else if (value == "level") block->type = ScenarioBlock::Type::LevelSweep;
      else if (value == "contiguous") block->type = ScenarioBlock::Type::Contiguous;
      else fail(line_no, "unknown scenario type '" + value + "'");
    } else if (key == "dist" || key == "contaminant") {
      try {
        (key == "dist" ? block->dist : block->contaminant) = parse_spec(value);
      } catch (const std::invalid_argument& e) {
        fail(line_no, e.what());
      }
    } else if (key == "n") {
      for (const auto& tok : split(value, ','))
        block->ns.push_back(to_u64(tok, line_no));
    } else if (key == "tests") {
      try {
        for (const auto& tok : split(value, ','))
          block->tests.push_back(TestMethod::parse(tok));
      } catch (const std::invalid_argument& e) {
        fail(line_no, e.what());
      }
    } else if (key == "mu_from") {
      block->mu_from = to_double(value, line_no);
    } else if (key == "mu_to") {
      block->mu_to = to_double(value, line_no);
    } else if (key == "mu_step") {
      block->mu_step = to_double(value, line_no);
    } else if (key == "base_mu") {
      block->base_mu = to_double(value, line_no);
    } else if (key == "eps") {
      block->eps = to_double(value, line_no);
    } else {
      fail(line_no, "unknown scenario key '" + key + "'");
    }
  }

  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("config: alpha must be in (0,1)");
  if (cfg.reps < 1) throw std::invalid_argument("config: reps must be >= 1");
  for (const auto& sc : cfg.scenarios) {
    if (sc.id.empty()) throw std::invalid_argument("config: scenario without id");
    if (sc.tests.empty())
      throw std::invalid_argument("config: scenario '" + sc.id + "' has no tests");
    if (sc.type == ScenarioBlock::Type::Power) {
      if (!sc.dist)
        throw std::invalid_argument("config: scenario '" + sc.id + "' needs dist");
      if (sc.ns.empty())
        throw std::invalid_argument("config: scenario '" + sc.id + "' needs n");
    } else if (sc.type == ScenarioBlock::Type::LevelSweep) {
      if (sc.mu_step <= 0.0 || sc.mu_to < sc.mu_from)
        throw std::invalid_argument("config: scenario '" + sc.id +
                                    "' has a bad mu grid");
      if (sc.ns.empty())
        throw std::invalid_argument("config: scenario '" + sc.id + "' needs n");
    } else {
      if (!sc.contaminant || sc.base_mu <= 0.0 || sc.eps <= 0.0)
        throw std::invalid_argument(
            "config: scenario '" + sc.id +
            "' needs base_mu, contaminant and eps");
      if (sc.ns.empty())
        throw std::invalid_argument("config: scenario '" + sc.id + "' needs n");
    }
  }
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

void emit_row(std::ostream& out, const PowerRow& row, const std::string& family,
              const std::string& params, std::size_t n, std::uint64_t seed) {
  out << csv_field(row.scenario_id) << ',' << csv_field(family) << ','
      << csv_field(params) << ',' << n << ',' << row.reps << ',' << row.test
      << ',' << row.k_used_mode << ',' << fmt("%.4f", row.rejection_rate) << ','
      << fmt("%.6g", row.mc_stderr) << ',' << seed << '\n';
}

}  // namespace

std::string run_config_csv(const SimConfig& cfg, int threads) {
  std::ostringstream out;
  out << "scenario_id,family,params,n,reps,test,k_used_mode,rejection_rate,"
         "mc_stderr,seed\n";

  for (const auto& sc : cfg.scenarios) {
    switch (sc.type) {
      case ScenarioBlock::Type::Power: {
        std::string family, params;
        split_spec(*sc.dist, family, params);
        for (std::size_t n : sc.ns) {
          ScenarioConfig run{*sc.dist, n,        cfg.reps, sc.tests,
                             cfg.alpha, cfg.seed, sc.id + "/n=" + std::to_string(n)};
          for (const auto& row : run_scenario(run, threads))
            emit_row(out, row, family, params, n, cfg.seed);
        }
        break;
      }
      case ScenarioBlock::Type::LevelSweep: {
        for (std::size_t n : sc.ns) {
          for (int i = 0;; ++i) {
            double mu = sc.mu_from + i * sc.mu_step;
            if (mu > sc.mu_to + 1e-9) break;
            DistSpec dist = DistSpec::poisson(mu);
            std::string family, params;
            split_spec(dist, family, params);
            ScenarioConfig run{dist,      n,        cfg.reps, sc.tests,
                               cfg.alpha, cfg.seed,
                               sc.id + "/n=" + std::to_string(n) + "/mu=" +
                                   fmt("%g", mu)};
            for (const auto& row : run_scenario(run, threads))
              emit_row(out, row, family, params, n, cfg.seed);
          }
        }
        break;
      }
      case ScenarioBlock::Type::Contiguous: {
        std::string contam = spec_string(*sc.contaminant);
        for (std::size_t n : sc.ns) {
          std::string id = sc.id + "/n=" + std::to_string(n);
          auto curves = power_curve_contiguous(sc.base_mu, *sc.contaminant, n,
                                               sc.eps, cfg.reps, sc.tests,
                                               cfg.alpha, cfg.seed, id, threads);
          for (const auto& curve : curves) {
            for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
              PowerRow row;
              row.scenario_id = id;
              row.test = curve.test.name();
              row.reps = cfg.reps;
              row.rejection_rate = curve.power[i];
              row.mc_stderr = std::sqrt(curve.power[i] * (1.0 - curve.power[i]) /
                                        static_cast<double>(cfg.reps));
              emit_row(out, row, "ContiguousMixture",
                       "mu=" + fmt("%g", sc.base_mu) + ";Y=" + contam +
                           ";lambda=" + fmt("%g", curve.lambdas[i]),
                       n, cfg.seed);
            }
            PowerRow summary;
            summary.scenario_id = id;
            summary.test = "rhat(" + curve.test.name() + ")";
            summary.reps = cfg.reps;
            summary.rejection_rate = r_hat(curve);
            summary.mc_stderr = 0.0;
            emit_row(out, summary, "ContiguousMixture",
                     "mu=" + fmt("%g", sc.base_mu) + ";Y=" + contam +
                         ";lambda=all",
                     n, cfg.seed);
          }
        }
        break;
      }
    }
  }
  return out.str();
}

}  // namespace poistest
