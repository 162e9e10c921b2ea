#include "hamest/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hamest/differentiation.hpp"
#include "hamest/errors.hpp"
#include "hamest/pea.hpp"

namespace hamest {

namespace {

using nlohmann::json;

class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const auto mark = node.Mark();
    const std::string where =
        mark.line >= 0 ? source_ + ":" + std::to_string(mark.line + 1) + ": " : source_ + ": ";
    throw ConfigError(where + message);
  }

  void require_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, "'" + field + "' must be a mapping");
  }

  void check_keys(const YAML::Node& node, const std::string& section,
                  std::initializer_list<const char*> allowed) const {
    require_map(node, section.empty() ? "config" : section);
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        fail(kv.first, "unknown key '" + (section.empty() ? key : section + "." + key) + "'");
      }
    }
  }

  template <typename T>
  T get(const YAML::Node& node, const std::string& field, const char* kind) const {
    if (!node.IsScalar()) fail(node, "'" + field + "' must be " + kind);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + field + "' must be " + kind);
    }
  }

  double number(const YAML::Node& node, const std::string& field) const {
    const double v = get<double>(node, field, "a number");
    if (!std::isfinite(v)) fail(node, "'" + field + "' must be finite");
    return v;
  }

  int integer(const YAML::Node& node, const std::string& field, int min) const {
    const long long v = get<long long>(node, field, "an integer");
    if (v < min || v > std::numeric_limits<int>::max()) {
      fail(node, "'" + field + "' must be an integer >= " + std::to_string(min));
    }
    return static_cast<int>(v);
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    return get<std::string>(node, field, "a string");
  }

  bool boolean(const YAML::Node& node, const std::string& field) const {
    return get<bool>(node, field, "true or false");
  }

  std::vector<int> int_list(const YAML::Node& node, const std::string& field, int min) const {
    if (!node.IsSequence() || node.size() == 0) fail(node, "'" + field + "' must be a nonempty list");
    std::vector<int> out;
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(integer(node[i], field + "[" + std::to_string(i) + "]", min));
    return out;
  }

  Complex complex_entry(const YAML::Node& node, const std::string& field) const {
    if (node.IsScalar()) return Complex(number(node, field), 0.0);
    if (node.IsSequence() && node.size() == 2)
      return Complex(number(node[0], field + ".re"), number(node[1], field + ".im"));
    fail(node, "'" + field + "' must be a number or a [re, im] pair");
  }

 private:
  std::string source_;
};

std::vector<double> read_t_grid(const YamlReader& r, const YAML::Node& node) {
  std::vector<double> grid;
  if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      grid.push_back(r.number(node[i], "t_grid[" + std::to_string(i) + "]"));
  } else if (node.IsMap()) {
    r.check_keys(node, "t_grid", {"start", "stop", "count"});
    if (!node["start"] || !node["stop"] || !node["count"])
      r.fail(node, "'t_grid' needs start, stop and count");
    const double start = r.number(node["start"], "t_grid.start");
    const double stop = r.number(node["stop"], "t_grid.stop");
    const int count = r.integer(node["count"], "t_grid.count", 1);
    for (int i = 0; i < count; ++i) {
      grid.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    }
  } else {
    r.fail(node, "'t_grid' must be a list or a {start, stop, count} mapping");
  }
  if (grid.empty()) r.fail(node, "'t_grid' must not be empty");
  return grid;
}

FamilySpec read_family(const YamlReader& r, const YAML::Node& node,
                       const std::filesystem::path& base_dir) {
  r.check_keys(node, "family", {"name", "omega", "mu", "D", "E", "preset", "generator", "path"});
  FamilySpec spec;
  if (!node["name"]) r.fail(node, "'family.name' is required");
  spec.name = r.text(node["name"], "family.name");
  auto& p = spec.params;
  if (node["omega"]) p.omega = r.number(node["omega"], "family.omega");
  if (node["mu"]) p.mu = r.number(node["mu"], "family.mu");
  if (node["D"]) p.zero_field = r.number(node["D"], "family.D");
  if (node["E"]) p.strain = r.number(node["E"], "family.E");
  if (node["preset"]) p.preset = r.text(node["preset"], "family.preset");
  if (node["path"]) {
    std::filesystem::path path = r.text(node["path"], "family.path");
    spec.path = path.is_relative() ? base_dir / path : path;
  }
  if (const YAML::Node g = node["generator"]) {
    if (!g.IsSequence() || g.size() == 0) r.fail(g, "'family.generator' must be a list of rows");
    const Index d = static_cast<Index>(g.size());
    ComplexMatrix m(d, d);
    for (Index i = 0; i < d; ++i) {
      const YAML::Node row = g[static_cast<std::size_t>(i)];
      if (!row.IsSequence() || static_cast<Index>(row.size()) != d)
        r.fail(row, "'family.generator' must be square");
      for (Index j = 0; j < d; ++j) {
        m(i, j) = r.complex_entry(row[static_cast<std::size_t>(j)],
                                  "family.generator[" + std::to_string(i) + "][" +
                                      std::to_string(j) + "]");
      }
    }
    p.generator = m;
  }
  return spec;
}

const char* format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Runs body(i) for i in [0, count) on up to `jobs` threads.  The error with
// the lowest index wins, so failures are reported deterministically.
template <typename Body>
void parallel_for(std::size_t count, int jobs, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard guard(lock);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

template <typename Fn>
auto at_point(const std::string& where, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(where + ": " + e.what());
  }
}

// True when some energy level moves with ξ.
bool spectrum_moves(const HamiltonianFamily& fam, double xi) {
  const Stencil st = make_stencil(xi, 0.0);
  if (!fam.range().contains(st.minus()) || !fam.range().contains(st.plus())) return true;
  const RealVector lo = energy_basis(fam, st.minus()).energies;
  const RealVector hi = energy_basis(fam, st.plus()).energies;
  const double slope = (hi - lo).cwiseAbs().maxCoeff() / (2 * st.h);
  const double scale = std::max(1.0, energy_basis(fam, xi).energies.cwiseAbs().maxCoeff());
  return slope > 1e-7 * scale;
}

void require_t_grid(const ExperimentConfig& c, Mode mode) {
  if (c.t_grid.empty()) throw ConfigError("mode " + to_string(mode) + " needs a nonempty 't_grid'");
}

Summary summarize_sweep(const std::vector<SweepRecord>& records) {
  Summary s;
  s.records = records.size();
  s.max_delta = -std::numeric_limits<double>::infinity();
  s.min_saturation = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    s.max_delta = std::max(s.max_delta, r.delta);
    if (r.g_bound > 0.0) s.min_saturation = std::min(s.min_saturation, r.fi_optimized / r.g_bound);
  }
  if (records.empty()) s.max_delta = 0.0;
  if (!std::isfinite(s.min_saturation)) s.min_saturation = 0.0;
  return s;
}

std::vector<SweepRecord> run_time_sweep(const ExperimentConfig& c, const HamiltonianFamily& fam,
                                        bool optimize, int jobs) {
  std::vector<SweepRecord> out(c.t_grid.size());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    const double t = c.t_grid[i];
    out[i] = at_point("t=" + fmt(t), [&] {
      const GBoundReport report = g_bound(fam, c.xi, t);
      SweepRecord rec;
      rec.t = t;
      rec.cqfi = report.cqfi;
      rec.g_bound = report.g_bound;
      rec.delta = report.delta;
      rec.equioriented = report.equioriented;
      rec.fi_optimized =
          optimize ? maximize_fi(fam, c.xi, t, c.optimizer).value : report.fi_at_optimum;
      rec.validate();
      return rec;
    });
  });
  return out;
}

std::vector<SweepRecord> run_pea_sweep(const ExperimentConfig& c, const HamiltonianFamily& fam,
                                       int jobs) {
  struct Task {
    double t;
    int n, m;
  };
  std::vector<Task> tasks;
  for (double t : c.t_grid)
    for (int n : c.pea.n_list)
      for (int m : c.pea.m_list) tasks.push_back({t, n, m});
  const bool bounded = !spectrum_moves(fam, c.xi);
  std::vector<SweepRecord> out(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::string where =
        "t=" + fmt(task.t) + " n=" + std::to_string(task.n) + " m=" + std::to_string(task.m);
    out[i] = at_point(where, [&] {
      const GBoundReport report = g_bound(fam, c.xi, task.t);
      SweepRecord rec;
      rec.t = task.t;
      rec.n = task.n;
      rec.m = task.m;
      rec.cqfi = report.cqfi;
      rec.g_bound = report.g_bound;
      rec.delta = report.delta;
      rec.equioriented = report.equioriented;
      rec.fi_optimized = report.fi_at_optimum;
      rec.pea_bounded = bounded;
      if (c.pea.optimize) {
        rec.fi_pea = maximize_pea_fi(fam, c.xi, task.t, task.n, task.m, c.pea.tau, c.optimizer).value;
      } else {
        const GBoundReport balanced = g_bound(fam, c.xi, task.t, 0.5 * std::numbers::pi);
        PeaConfig cfg;
        cfg.n = task.n;
        cfg.m = task.m;
        cfg.tau = c.pea.tau;
        cfg.interrogation_t = task.t;
        cfg.control = balanced.v_opt;
        cfg.preparation = balanced.psi0_opt;
        rec.fi_pea = pea_fi(fam, c.xi, cfg);
      }
      rec.validate();
      return rec;
    });
  });
  return out;
}

std::vector<LemmaRecord> run_lemma(const ExperimentConfig& c, int jobs) {
  std::vector<LemmaRecord> out(static_cast<std::size_t>(c.lemma.trials));
  const Index d = c.lemma.dim;
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(c.optimizer.seed),
                      static_cast<std::uint32_t>(c.optimizer.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    Rng rng(seq);
    const HermitianOperator m1 = random_hermitian(d, rng), m2 = random_hermitian(d, rng);
    const GapSumMaximizer best = gap_sum_maximizer(m1, m2);
    auto gap_with = [&](const ComplexMatrix& v) {
      return spectral_gap(HermitianOperator::symmetrized(m1.matrix() + v * m2.matrix() * v.adjoint()));
    };
    LemmaRecord rec;
    rec.trial = static_cast<int>(i);
    rec.dim = static_cast<int>(d);
    rec.predicted = best.value;
    rec.achieved = gap_with(best.u.matrix());
    rec.best_random = 0.0;
    for (int k = 0; k < c.lemma.samples_per_pair; ++k)
      rec.best_random = std::max(rec.best_random, gap_with(random_unitary(d, rng).matrix()));
    rec.violation = std::abs(rec.achieved - rec.predicted) > 1e-9 ||
                    rec.best_random > rec.predicted + 1e-9;
    out[i] = rec;
  });
  return out;
}

json config_echo(const ExperimentConfig& c, Mode mode) {
  json family{{"name", c.family.name}};
  const auto& p = c.family.params;
  if (p.omega) family["omega"] = *p.omega;
  if (p.mu) family["mu"] = *p.mu;
  if (p.zero_field) family["D"] = *p.zero_field;
  if (p.strain) family["E"] = *p.strain;
  if (p.preset) family["preset"] = *p.preset;
  if (c.family.path) family["path"] = c.family.path->generic_string();
  if (p.generator) {
    json rows = json::array();
    for (Index i = 0; i < p.generator->rows(); ++i) {
      json row = json::array();
      for (Index j = 0; j < p.generator->cols(); ++j)
        row.push_back({(*p.generator)(i, j).real(), (*p.generator)(i, j).imag()});
      rows.push_back(row);
    }
    family["generator"] = rows;
  }
  return json{{"mode", to_string(mode)},
              {"family", family},
              {"xi", c.xi},
              {"t_grid", c.t_grid},
              {"optimizer",
               {{"restarts", c.optimizer.restarts},
                {"seed", c.optimizer.seed},
                {"max_iterations", c.optimizer.max_iterations},
                {"initial_step", c.optimizer.initial_step}}},
              {"pea",
               {{"n_list", c.pea.n_list},
                {"m_list", c.pea.m_list},
                {"tau", c.pea.tau},
                {"optimize", c.pea.optimize}}},
              {"lemma",
               {{"trials", c.lemma.trials},
                {"dim", c.lemma.dim},
                {"samples_per_pair", c.lemma.samples_per_pair}}},
              {"dump", {{"lo", c.dump.lo}, {"hi", c.dump.hi}, {"points", c.dump.points}}},
              {"output", {{"format", format_name(c.output.format)}}}};
}

json summary_json(const RunResult& r) {
  json s{{"mode", to_string(r.mode)}, {"records", r.summary.records}};
  if (r.mode == Mode::lemma_test) {
    s["violations"] = r.summary.violations;
  } else if (r.mode != Mode::dump_family) {
    s["max_delta"] = r.summary.max_delta;
    s["min_saturation"] = r.summary.min_saturation;
  }
  return s;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::bound_compare: return "bound-compare";
    case Mode::optimize: return "optimize";
    case Mode::pea_sweep: return "pea-sweep";
    case Mode::lemma_test: return "lemma-test";
    case Mode::dump_family: return "dump-family";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::bound_compare, Mode::optimize, Mode::pea_sweep, Mode::lemma_test,
                 Mode::dump_family}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown mode '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  const YamlReader r(source);
  if (root.IsNull()) throw ConfigError(source + ": empty config");
  r.check_keys(root, "",
               {"mode", "family", "xi", "t_grid", "optimizer", "pea", "lemma", "dump", "output"});

  ExperimentConfig c;
  if (root["mode"]) {
    try {
      c.mode = parse_mode(r.text(root["mode"], "mode"));
    } catch (const ConfigError& e) {
      r.fail(root["mode"], e.what());
    }
  }
  if (root["family"]) c.family = read_family(r, root["family"], base_dir);
  if (root["xi"]) c.xi = r.number(root["xi"], "xi");
  if (root["t_grid"]) c.t_grid = read_t_grid(r, root["t_grid"]);

  if (const YAML::Node o = root["optimizer"]) {
    r.check_keys(o, "optimizer", {"restarts", "seed", "max_iterations", "initial_step"});
    if (o["restarts"]) c.optimizer.restarts = r.integer(o["restarts"], "optimizer.restarts", 0);
    if (o["seed"]) c.optimizer.seed = r.get<std::uint64_t>(o["seed"], "optimizer.seed", "an unsigned integer");
    if (o["max_iterations"])
      c.optimizer.max_iterations = r.integer(o["max_iterations"], "optimizer.max_iterations", 0);
    if (o["initial_step"]) {
      c.optimizer.initial_step = r.number(o["initial_step"], "optimizer.initial_step");
      if (!(c.optimizer.initial_step > 0.0)) r.fail(o["initial_step"], "'optimizer.initial_step' must be > 0");
    }
  }
  if (const YAML::Node p = root["pea"]) {
    r.check_keys(p, "pea", {"n_list", "m_list", "tau", "optimize"});
    if (p["n_list"]) c.pea.n_list = r.int_list(p["n_list"], "pea.n_list", 1);
    if (p["m_list"]) c.pea.m_list = r.int_list(p["m_list"], "pea.m_list", 1);
    if (p["tau"]) {
      c.pea.tau = r.number(p["tau"], "pea.tau");
      if (!(c.pea.tau > 0.0)) r.fail(p["tau"], "'pea.tau' must be > 0");
    }
    if (p["optimize"]) c.pea.optimize = r.boolean(p["optimize"], "pea.optimize");
  }
  if (const YAML::Node l = root["lemma"]) {
    r.check_keys(l, "lemma", {"trials", "dim", "samples_per_pair"});
    if (l["trials"]) c.lemma.trials = r.integer(l["trials"], "lemma.trials", 1);
    if (l["dim"]) c.lemma.dim = r.integer(l["dim"], "lemma.dim", 1);
    if (l["samples_per_pair"])
      c.lemma.samples_per_pair = r.integer(l["samples_per_pair"], "lemma.samples_per_pair", 0);
  }
  if (const YAML::Node d = root["dump"]) {
    r.check_keys(d, "dump", {"lo", "hi", "points"});
    if (d["lo"]) c.dump.lo = r.number(d["lo"], "dump.lo");
    if (d["hi"]) c.dump.hi = r.number(d["hi"], "dump.hi");
    if (d["points"]) c.dump.points = r.integer(d["points"], "dump.points", 5);
    if (!(c.dump.lo < c.dump.hi)) r.fail(d, "'dump' needs lo < hi");
  }
  if (const YAML::Node o = root["output"]) {
    r.check_keys(o, "output", {"path", "format"});
    if (o["path"]) {
      std::filesystem::path path = r.text(o["path"], "output.path");
      c.output.path = path.is_relative() ? base_dir / path : path;
    }
    if (o["format"]) {
      const std::string f = r.text(o["format"], "output.format");
      if (f == "csv") {
        c.output.format = OutputFormat::csv;
      } else if (f == "json") {
        c.output.format = OutputFormat::json;
      } else {
        r.fail(o["format"], "'output.format' must be csv or json");
      }
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string(), path.parent_path());
}

HamiltonianFamily make_family(const FamilySpec& spec) {
  if (spec.name == "custom") {
    if (!spec.path) throw ConfigError("custom family needs 'family.path'");
    const auto& p = spec.params;
    if (p.omega || p.mu || p.zero_field || p.strain || p.preset || p.generator) {
      throw ConfigError("custom family takes only 'family.path'");
    }
    return load_custom_family(*spec.path);
  }
  if (spec.path) throw ConfigError("'family.path' applies to custom families only");
  try {
    return families::by_name(spec.name, spec.params);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("family '" + spec.name + "': " + e.what());
  }
}

void SweepRecord::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(t) || !finite(cqfi) || !finite(g_bound) || !finite(delta) || !finite(fi_optimized) ||
      (fi_pea && !finite(*fi_pea))) {
    throw NumericalError("record contains a non-finite value");
  }
  if (fi_optimized > g_bound + 1e-6) {
    throw NumericalError("fi_optimized " + fmt(fi_optimized) + " exceeds g_bound " + fmt(g_bound));
  }
  if (fi_pea && pea_bounded && *fi_pea > g_bound + 1e-6) {
    throw NumericalError("fi_pea " + fmt(*fi_pea) + " exceeds g_bound " + fmt(g_bound));
  }
}

RunResult run(const ExperimentConfig& c, Mode mode, int jobs) {
  if (c.mode && *c.mode != mode) {
    throw ConfigError("config mode '" + to_string(*c.mode) + "' does not match command '" +
                      to_string(mode) + "'");
  }
  RunResult result;
  result.mode = mode;
  if (mode == Mode::lemma_test) {
    result.lemma = run_lemma(c, jobs);
    result.summary.records = result.lemma.size();
    for (const auto& rec : result.lemma) result.summary.violations += rec.violation ? 1 : 0;
    return result;
  }

  const HamiltonianFamily fam = make_family(c.family);
  if (mode == Mode::dump_family) {
    result.grid = sample_family(fam, c.dump.lo, c.dump.hi, static_cast<std::size_t>(c.dump.points));
    result.summary.records = result.grid.xi.size();
    return result;
  }

  if (!fam.range().contains(c.xi)) {
    throw ConfigError("xi=" + fmt(c.xi) + " lies outside the family's parameter range");
  }
  require_t_grid(c, mode);
  switch (mode) {
    case Mode::bound_compare: result.sweep = run_time_sweep(c, fam, false, jobs); break;
    case Mode::optimize: result.sweep = run_time_sweep(c, fam, true, jobs); break;
    case Mode::pea_sweep: result.sweep = run_pea_sweep(c, fam, jobs); break;
    default: break;
  }
  result.summary = summarize_sweep(result.sweep);
  return result;
}

std::string format_csv(const RunResult& r) {
  std::ostringstream out;
  if (r.mode == Mode::dump_family) {
    write_family_grid(out, r.grid);
    return out.str();
  }
  if (r.mode == Mode::lemma_test) {
    out << "trial,dim,predicted,achieved,best_random,violation\n";
    for (const auto& rec : r.lemma) {
      out << rec.trial << ',' << rec.dim << ',' << fmt(rec.predicted) << ',' << fmt(rec.achieved)
          << ',' << fmt(rec.best_random) << ',' << (rec.violation ? "true" : "false") << '\n';
    }
    return out.str();
  }
  out << "t,n,m,cqfi,g_bound,delta,fi_optimized,fi_pea,equioriented,pea_bounded\n";
  for (const auto& rec : r.sweep) {
    rec.validate();
    out << fmt(rec.t) << ',' << (rec.n ? std::to_string(*rec.n) : "") << ','
        << (rec.m ? std::to_string(*rec.m) : "") << ',' << fmt(rec.cqfi) << ',' << fmt(rec.g_bound)
        << ',' << fmt(rec.delta) << ',' << fmt(rec.fi_optimized) << ','
        << (rec.fi_pea ? fmt(*rec.fi_pea) : "") << ',' << (rec.equioriented ? "true" : "false")
        << ',' << (rec.pea_bounded ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string format_json(const RunResult& r, const ExperimentConfig& c) {
  json records = json::array();
  if (r.mode == Mode::dump_family) {
    for (std::size_t i = 0; i < r.grid.xi.size(); ++i) {
      const ComplexMatrix& m = r.grid.matrices[i];
      json rows = json::array();
      for (Index a = 0; a < m.rows(); ++a) {
        json row = json::array();
        for (Index b = 0; b < m.cols(); ++b) row.push_back({m(a, b).real(), m(a, b).imag()});
        rows.push_back(row);
      }
      records.push_back({{"xi", r.grid.xi[i]}, {"matrix", rows}});
    }
  } else if (r.mode == Mode::lemma_test) {
    for (const auto& rec : r.lemma) {
      records.push_back({{"trial", rec.trial},
                         {"dim", rec.dim},
                         {"predicted", rec.predicted},
                         {"achieved", rec.achieved},
                         {"best_random", rec.best_random},
                         {"violation", rec.violation}});
    }
  } else {
    for (const auto& rec : r.sweep) {
      rec.validate();
      json row{{"t", rec.t},
               {"cqfi", rec.cqfi},
               {"g_bound", rec.g_bound},
               {"delta", rec.delta},
               {"fi_optimized", rec.fi_optimized},
               {"equioriented", rec.equioriented},
               {"pea_bounded", rec.pea_bounded}};
      row["n"] = rec.n ? json(*rec.n) : json(nullptr);
      row["m"] = rec.m ? json(*rec.m) : json(nullptr);
      row["fi_pea"] = rec.fi_pea ? json(*rec.fi_pea) : json(nullptr);
      records.push_back(row);
    }
  }
  const json doc{{"config", config_echo(c, r.mode)}, {"records", records}, {"summary", summary_json(r)}};
  return doc.dump(2) + "\n";
}

std::string format_summary(const RunResult& r) { return summary_json(r).dump() + "\n"; }

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.empty()) throw ConfigError("no output path given");
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move output into '" + path.string() + "': " + ec.message());
  }
}

}  // namespace hamest
