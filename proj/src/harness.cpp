#include "lookahead/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "lookahead/env_io.hpp"
#include "lookahead/errors.hpp"

namespace lookahead {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kRunHeader = "seed,k,vstar,policy_value,cum_regret,elapsed_ms";
constexpr const char* kSummaryHeader = "config_id,seeds,K,final_regret_mean,final_regret_se,slope";

fs::path checkpoint_path(const ExperimentConfig& config, std::uint64_t seed) {
  return config.output / (config.id + "__seed" + std::to_string(seed) + ".ckpt.json");
}

void write_text_atomically(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << text;
    if (!out) throw InputError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_checkpoint(const ExperimentConfig& config, std::uint64_t seed, const RegretCurve& curve,
                      const Learner& learner) {
  json points = json::array();
  for (const auto& p : curve.points) {
    points.push_back({p.k, p.vstar, p.policy_value, p.cum_regret, p.elapsed_ms, p.optimistic});
  }
  json doc{{"config_id", config.id}, {"seed", seed}, {"points", std::move(points)}};
  doc["store"] = learner.store() ? learner.store()->to_json() : json(nullptr);
  write_text_atomically(checkpoint_path(config, seed), doc.dump());
}

void read_checkpoint(const fs::path& path, RegretCurve& curve, Learner& learner) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read checkpoint " + path.string());
  try {
    const json doc = json::parse(in);
    for (const auto& row : doc.at("points")) {
      RegretPoint p;
      p.k = row.at(0).get<std::int64_t>();
      p.vstar = row.at(1).get<double>();
      p.policy_value = row.at(2).get<double>();
      p.cum_regret = row.at(3).get<double>();
      p.elapsed_ms = row.at(4).get<double>();
      p.optimistic = row.at(5).get<double>();
      if (p.k != static_cast<std::int64_t>(curve.points.size()) + 1) throw InputError("episodes out of order");
      curve.points.push_back(p);
    }
    if (!doc.at("store").is_null()) learner.restore(EmpiricalStore::from_json(doc.at("store")));
  } catch (const json::exception& e) {
    throw InputError("corrupt checkpoint " + path.string() + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError("corrupt checkpoint " + path.string() + ": " + e.what());
  }
}

double parse_double(const std::string& field, const fs::path& path, std::size_t line) {
  char* end = nullptr;
  const double x = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw InputError(path.string() + ":" + std::to_string(line) + ": bad number '" + field + "'");
  }
  return x;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += (c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

}  // namespace

std::string to_string(RegretMode mode) {
  return mode == RegretMode::ExactEval ? "exact-eval" : "realized-return";
}

RegretMode regret_mode_from_string(const std::string& name) {
  if (name == "exact-eval") return RegretMode::ExactEval;
  if (name == "realized-return") return RegretMode::RealizedReturn;
  throw InputError("unknown regret mode '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (K < 1) throw InputError("experiment '" + id + "': K must be at least 1");
  if (seeds.empty()) throw InputError("experiment '" + id + "': seeds must be non-empty");
  if (id.empty() || id.find("__seed") != std::string::npos || id.find('/') != std::string::npos) {
    throw InputError("experiment id '" + id + "' must be non-empty and free of '/' and '__seed'");
  }
  if (!env.file && !env.spec) throw InputError("experiment '" + id + "': no environment given");
  if (checkpoint_every < 0) throw InputError("experiment '" + id + "': checkpoint_every must be >= 0");
  if (learner.algo == Algorithm::MvpRl && regime != Regime::Reward) {
    throw InputError("experiment '" + id + "': mvp-rl needs regime reward");
  }
  if (learner.algo == Algorithm::MvpTl && regime != Regime::Transition) {
    throw InputError("experiment '" + id + "': mvp-tl needs regime transition");
  }
  try {
    learner.bonus.validate();
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
}

ExperimentConfig experiment_config_from_json(const json& doc, const fs::path& base_dir) {
  ExperimentConfig c;
  try {
    c.id = doc.value("id", c.id);
    const auto& env = doc.at("env");
    if (env.contains("file")) {
      fs::path file = env.at("file").get<std::string>();
      if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
      c.env.file = file;
    } else {
      EnvSpecParams p;
      p.family = env.at("family").get<std::string>();
      p.S = env.value("S", p.S);
      p.A = env.value("A", p.A);
      p.H = env.value("H", p.H);
      p.n = env.value("n", p.n);
      p.p = env.value("p", p.p);
      p.seed = env.value("seed", p.seed);
      p.independent = env.value("independent", p.independent);
      c.env.spec = p;
    }
    c.learner = learner_config_from_json(doc.at("learner"));
    c.regime = regime_from_string(doc.at("regime").get<std::string>());
    c.K = doc.at("K").get<std::int64_t>();
    c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    c.regret_mode = regret_mode_from_string(doc.value("regret_mode", std::string("exact-eval")));
    c.output = doc.value("output", std::string("."));
    c.checkpoint_every = doc.value("checkpoint_every", c.checkpoint_every);
    c.timing = doc.value("timing", c.timing);
    c.support_cap = doc.value("support_cap", c.support_cap);
  } catch (const json::exception& e) {
    throw InputError(std::string("experiment config: ") + e.what());
  } catch (const ContractError& e) {
    throw InputError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return experiment_config_from_json(doc, path.parent_path());
}

json experiment_config_to_json(const ExperimentConfig& c) {
  json env;
  if (c.env.file) {
    env["file"] = c.env.file->string();
  } else if (c.env.spec) {
    const auto& p = *c.env.spec;
    env = {{"family", p.family}, {"S", p.S}, {"A", p.A}, {"H", p.H}, {"n", p.n},
           {"p", p.p}, {"seed", p.seed}, {"independent", p.independent}};
  }
  return {{"id", c.id},
          {"env", env},
          {"learner", learner_config_to_json(c.learner)},
          {"regime", to_string(c.regime)},
          {"K", c.K},
          {"seeds", c.seeds},
          {"regret_mode", to_string(c.regret_mode)},
          {"output", c.output.string()},
          {"checkpoint_every", c.checkpoint_every},
          {"timing", c.timing},
          {"support_cap", c.support_cap}};
}

TabularLookaheadMdp resolve_env(const EnvRef& env) {
  if (env.file) return load_mdp(*env.file);
  if (env.spec) return make_env(*env.spec);
  throw InputError("no environment given");
}

std::vector<double> RegretCurve::cumulative() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.cum_regret);
  return out;
}

RegretCurve run_seed(const ExperimentConfig& config, const TabularLookaheadMdp& mdp, const ValueTable& vstar_table,
                     std::uint64_t seed, const RunOptions& options) {
  auto learner = make_learner(config.learner, mdp, config.regime);
  RegretCurve curve{config.id, seed, {}};
  curve.points.reserve(static_cast<std::size_t>(config.K));

  const fs::path ckpt = checkpoint_path(config, seed);
  if (options.resume && fs::exists(ckpt)) read_checkpoint(ckpt, curve, *learner);
  double cum = curve.points.empty() ? 0.0 : curve.points.back().cum_regret;

  for (std::int64_t k = static_cast<std::int64_t>(curve.points.size()) + 1; k <= config.K; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    learner->begin_episode(k);
    const int s1 = mdp.initial_state(k);
    RegretPoint point;
    point.k = k;
    point.vstar = vstar_table(0, s1);
    point.optimistic = learner->optimistic_value(s1);
    if (config.regret_mode == RegretMode::ExactEval) {
      try {
        point.policy_value = evaluate_lookahead_policy(mdp, learner->policy(), config.support_cap)(0, s1);
      } catch (const CapacityError& e) {
        throw CapacityError(std::string(e.what()) + " while evaluating episode " + std::to_string(k));
      }
    }
    const EpisodeRecord record = run_episode(mdp, *learner, config.regime, k, seed);
    if (config.regret_mode == RegretMode::RealizedReturn) point.policy_value = record.ret;
    cum += point.vstar - point.policy_value;
    point.cum_regret = cum;
    learner->observe(record);
    if (config.timing) {
      point.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    curve.points.push_back(point);
    if (options.on_episode) options.on_episode(point, *learner);
    if (config.checkpoint_every > 0 && k % config.checkpoint_every == 0) {
      write_checkpoint(config, seed, curve, *learner);
    }
  }
  return curve;
}

std::vector<RegretCurve> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const TabularLookaheadMdp mdp = resolve_env(config.env);
  const ValueTable vstar = plan_optimal(mdp, config.regime).values;
  std::vector<RegretCurve> curves;
  for (auto seed : config.seeds) {
    curves.push_back(run_seed(config, mdp, vstar, seed, options));
    write_run_csv(curves.back(), run_csv_path(config.output, config.id, seed));
  }
  return curves;
}

double slope_estimate(const std::vector<double>& cum_regret, double window) {
  const auto K = cum_regret.size();
  if (K < 100) throw ContractError("slope_estimate: need at least 100 episodes");
  if (!(window > 0.0 && window <= 1.0)) throw ContractError("slope_estimate: window must lie in (0, 1]");
  const auto first = static_cast<std::size_t>(std::floor(static_cast<double>(K) * (1.0 - window)));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = first; i < K; ++i) {
    if (!(cum_regret[i] > 0.0)) continue;
    const double x = std::log(static_cast<double>(i + 1));
    const double y = std::log(cum_regret[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || !(denom > 0.0)) throw ContractError("slope_estimate: slope undefined (too few positive regret values)");
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

double growth_ratio(const std::vector<double>& cum_regret) {
  if (cum_regret.size() < 2) throw ContractError("growth_ratio: need at least two episodes");
  return cum_regret.back() / cum_regret[cum_regret.size() / 2 - 1];
}

std::vector<double> mean_curve(const std::vector<const RegretCurve*>& runs) {
  if (runs.empty()) return {};
  std::size_t len = runs.front()->points.size();
  for (const auto* r : runs) len = std::min(len, r->points.size());
  std::vector<double> mean(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    double total = 0.0;
    for (const auto* r : runs) total += r->points[i].cum_regret;
    mean[i] = total / static_cast<double>(runs.size());
  }
  return mean;
}

std::vector<SummaryRow> summarize(std::vector<RegretCurve> curves) {
  std::stable_sort(curves.begin(), curves.end(), [](const RegretCurve& a, const RegretCurve& b) {
    return a.config_id != b.config_id ? a.config_id < b.config_id : a.seed < b.seed;
  });
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < curves.size();) {
    std::size_t j = i;
    std::vector<const RegretCurve*> group;
    while (j < curves.size() && curves[j].config_id == curves[i].config_id) group.push_back(&curves[j++]);

    const std::vector<double> mean = mean_curve(group);
    SummaryRow row;
    row.config_id = curves[i].config_id;
    row.seeds = static_cast<int>(group.size());
    row.K = static_cast<std::int64_t>(mean.size());
    const double n = static_cast<double>(group.size());
    double total = 0.0;
    for (const auto* r : group) total += r->points[mean.size() - 1].cum_regret;
    row.final_regret_mean = mean.empty() ? 0.0 : total / n;
    double ss = 0.0;
    for (const auto* r : group) {
      const double d = r->points[mean.size() - 1].cum_regret - row.final_regret_mean;
      ss += d * d;
    }
    row.final_regret_se = group.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    try {
      row.slope = slope_estimate(mean, 0.5);
    } catch (const ContractError&) {
      row.slope = std::nan("");
    }
    rows.push_back(row);
    i = j;
  }
  return rows;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path run_csv_path(const fs::path& dir, const std::string& config_id, std::uint64_t seed) {
  return dir / (config_id + "__seed" + std::to_string(seed) + ".csv");
}

void write_run_csv(const RegretCurve& curve, const fs::path& path) {
  std::string text = std::string(kRunHeader) + "\n";
  const std::string seed = std::to_string(curve.seed);
  for (const auto& p : curve.points) {
    text += seed + "," + std::to_string(p.k) + "," + format_number(p.vstar) + "," + format_number(p.policy_value) +
            "," + format_number(p.cum_regret) + "," + format_number(p.elapsed_ms) + "\n";
  }
  write_text_atomically(path, text);
}

RegretCurve read_run_csv(const fs::path& path) {
  const std::string stem = path.stem().string();
  const auto cut = stem.rfind("__seed");
  if (cut == std::string::npos || cut == 0) throw InputError(path.string() + ": file name is not <id>__seed<n>.csv");
  RegretCurve curve;
  curve.config_id = stem.substr(0, cut);
  try {
    std::size_t used = 0;
    const std::string digits = stem.substr(cut + 6);
    curve.seed = std::stoull(digits, &used);
    if (used != digits.size()) throw std::invalid_argument("seed");
  } catch (const std::exception&) {
    throw InputError(path.string() + ": bad seed in file name");
  }

  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunHeader) throw InputError(path.string() + ": missing or wrong header");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 6 fields");
    if (f[0] != std::to_string(curve.seed)) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": seed does not match file name");
    }
    RegretPoint p;
    p.k = static_cast<std::int64_t>(parse_double(f[1], path, lineno));
    if (p.k != static_cast<std::int64_t>(curve.points.size()) + 1) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": episodes out of order");
    }
    p.vstar = parse_double(f[2], path, lineno);
    p.policy_value = parse_double(f[3], path, lineno);
    p.cum_regret = parse_double(f[4], path, lineno);
    p.elapsed_ms = parse_double(f[5], path, lineno);
    if (!std::isfinite(p.vstar) || !std::isfinite(p.policy_value) || !std::isfinite(p.cum_regret)) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": non-finite value");
    }
    curve.points.push_back(p);
  }
  if (curve.points.empty()) throw InputError(path.string() + ": no episodes");
  return curve;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const fs::path& path) {
  std::string text = std::string(kSummaryHeader) + "\n";
  for (const auto& r : rows) {
    text += r.config_id + "," + std::to_string(r.seeds) + "," + std::to_string(r.K) + "," +
            format_number(r.final_regret_mean) + "," + format_number(r.final_regret_se) + "," +
            format_number(r.slope) + "\n";
  }
  write_text_atomically(path, text);
}

int effective_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("LOOKAHEAD_RL_THREADS")) {
    const int c = std::atoi(cap);
    if (c > 0) n = std::min(n, c);
  }
  return std::max(n, 1);
}

SweepResult sweep(const std::vector<ExperimentConfig>& configs, int parallelism, const fs::path& summary_dir) {
  struct Prepared {
    std::optional<TabularLookaheadMdp> mdp;
    ValueTable vstar;
    std::string error;
  };
  std::vector<Prepared> prepared(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    try {
      configs[c].validate();
      prepared[c].mdp.emplace(resolve_env(configs[c].env));
      prepared[c].vstar = plan_optimal(*prepared[c].mdp, configs[c].regime).values;
    } catch (const std::exception& e) {
      prepared[c].error = e.what();
    }
  }

  struct Task {
    std::size_t config;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (auto seed : configs[c].seeds) tasks.push_back({c, seed});
  }
  std::vector<std::optional<RegretCurve>> results(tasks.size());
  std::vector<std::string> errors(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& task = tasks[i];
      const auto& config = configs[task.config];
      const auto& prep = prepared[task.config];
      if (!prep.error.empty()) {
        errors[i] = prep.error;
        continue;
      }
      try {
        RegretCurve curve = run_seed(config, *prep.mdp, prep.vstar, task.seed);
        write_run_csv(curve, run_csv_path(config.output, config.id, task.seed));
        results[i] = std::move(curve);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::min<int>(effective_threads(parallelism), static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (results[i]) {
      out.curves.push_back(std::move(*results[i]));
    } else {
      out.failures.push_back({configs[tasks[i].config].id, tasks[i].seed, errors[i]});
    }
  }
  out.summary = summarize(out.curves);
  write_summary_csv(out.summary, summary_dir / "summary.csv");
  const fs::path errors_path = summary_dir / "errors.csv";
  if (out.failures.empty()) {
    fs::remove(errors_path);
  } else {
    std::string text = "config_id,seed,error\n";
    for (const auto& f : out.failures) text += f.config_id + "," + std::to_string(f.seed) + "," + csv_quote(f.error) + "\n";
    write_text_atomically(errors_path, text);
  }
  return out;
}

}  // namespace lookahead
