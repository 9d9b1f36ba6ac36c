#ifndef ROLLPLAN_BATCH_HPP
#define ROLLPLAN_BATCH_HPP

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "rollplan/io.hpp"
#include "rollplan/planner.hpp"

namespace rollplan {

struct Scenario {
  std::string name;
  RunConfig config;
};

struct ScenarioOutcome {
  std::string name;
  bool ran = false;
  std::string error;
  PlanResult result;
};

/// Scenario list: {"scenarios": [{"name": ..., "config": "relative/path.cfg"} | {"name": ..., "inline": {...}}]}.
inline std::vector<Scenario> load_scenarios(const std::filesystem::path &path) {
  const json j = parse_json_text(read_file(path), path.string());
  const json &arr = detail::field(j, "", "scenarios");
  if (!arr.is_array()) throw ConfigError("field 'scenarios': expected an array");
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "scenarios[" + std::to_string(i) + "]";
    const json &e = arr[i];
    Scenario s;
    s.name = detail::opt_str(e, where, "name", "scenario" + std::to_string(i));
    if (e.contains("inline")) {
      try {
        s.config = config_from_json(e.at("inline"));
      } catch (const ConfigError &err) {
        throw ConfigError(where + ".inline: " + err.what());
      }
    } else {
      const std::string rel = detail::opt_str(e, where, "config", "");
      if (rel.empty()) throw ConfigError("field '" + where + ".config': missing");
      s.config = load_config(path.parent_path() / rel);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Runs every scenario on at most `parallel` threads; results keep scenario order.
inline std::vector<ScenarioOutcome> run_batch(const std::vector<Scenario> &scenarios, unsigned parallel) {
  std::vector<ScenarioOutcome> out(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < scenarios.size();) {
      const Scenario &s = scenarios[i];
      ScenarioOutcome &o = out[i];
      o.name = s.name;
      try {
        o.result = plan(s.config.goal(), s.config.params());
        o.ran = true;
      } catch (const std::exception &e) {
        o.error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread &t : pool) t.join();
  return out;
}

inline std::string csv_quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string batch_summary_csv(const std::vector<ScenarioOutcome> &outcomes) {
  std::string out = "name,status,converged,iterations,e_n,e_r,e_p,e_s,error\n";
  for (const ScenarioOutcome &o : outcomes) {
    out += csv_quote(o.name) + ",";
    if (!o.ran) {
      out += "Error,false,0,,,,," + csv_quote(o.error) + "\n";
      continue;
    }
    const PlanResult &r = o.result;
    out += std::string(to_string(r.status)) + "," + (r.converged ? "true" : "false") + "," +
           std::to_string(r.log.size()) + ",";
    if (r.best) {
      const IterationDiagnostics &D = r.best->diag;
      out += fmt17(D.e_n) + "," + fmt17(D.e_r) + "," + fmt17(D.e_p) + "," + fmt17(D.e_s);
    } else {
      out += ",,,";
    }
    out += ",\n";
  }
  return out;
}

/// Per-scenario directories plus summary.csv. Nothing written depends on scheduling.
inline void write_batch_outputs(const std::filesystem::path &dir, const std::vector<Scenario> &scenarios,
                                const std::vector<ScenarioOutcome> &outcomes) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ran) continue;
    write_plan_outputs(dir / outcomes[i].name, outcomes[i].result, scenarios[i].config.goal(), false);
  }
  write_file(dir / "summary.csv", batch_summary_csv(outcomes));
}

} // namespace rollplan

#endif // ROLLPLAN_BATCH_HPP
