#include "specrange/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "specrange/oracle.hpp"

namespace specrange {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<double> GridSpec::values() const {
  std::vector<double> out;
  if (step <= 0.0) throw ConfigError("grid step must be positive");
  const int count = static_cast<int>(std::round((max - min) / step));
  out.reserve(count + 1);
  for (int k = 0; k <= count; ++k) out.push_back(min + k * step);
  return out;
}

namespace {

std::string format_number(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const json& node, const char* what) {
  if (node.is_string()) {
    const std::string text = node.get<std::string>();
    if (text == "inf") return kInf;
    if (text == "-inf") return -kInf;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty())
      throw ConfigError(std::string("bad number for ") + what + ": '" + text + "'");
    return value;
  }
  if (node.is_number()) return node.get<double>();
  throw ConfigError(std::string("expected a decimal string for ") + what);
}

Complex parse_complex(const json& node, const char* what) {
  if (!node.is_array() || node.size() != 2)
    throw ConfigError(std::string(what) + " must be a [re, im] pair");
  return {parse_number(node[0], what), parse_number(node[1], what)};
}

GridSpec parse_grid(const json& node, const char* what) {
  GridSpec grid;
  grid.min = parse_number(node.at("min"), what);
  grid.max = parse_number(node.at("max"), what);
  grid.step = parse_number(node.at("step"), what);
  return grid;
}

EnvelopeTable parse_envelope_table(const json& node, const std::string& base_dir) {
  EnvelopeTable table;
  if (node.contains("unbounded") && node["unbounded"].get<bool>()) {
    table.unbounded = true;
    return table;
  }
  if (node.contains("samples")) {
    for (const json& row : node["samples"]) {
      if (!row.is_array() || row.size() != 2)
        throw ConfigError("envelope sample rows must be [x, value] pairs");
      table.samples.emplace_back(parse_number(row[0], "envelope x"),
                                 parse_number(row[1], "envelope value"));
    }
    return table;
  }
  if (node.contains("expr")) {
    const CoeffExpr expr = parse_coeff(node["expr"].get<std::string>());
    const double a = parse_number(node.at("interval").at(0), "envelope interval");
    const double b = parse_number(node.at("interval").at(1), "envelope interval");
    const int count = node.contains("count") ? node["count"].get<int>() : 1024;
    table.samples = sample_function(
        [&expr](double x) { return expr.eval(Complex(x, 0.0)).real(); }, a, b, count);
    return table;
  }
  if (node.contains("csv")) {
    std::string path = node["csv"].get<std::string>();
    if (!base_dir.empty() && !fs::path(path).is_absolute())
      path = (fs::path(base_dir) / path).string();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open envelope csv: " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line == "x,value") continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ConfigError("bad envelope csv row: " + line);
      table.samples.emplace_back(std::strtod(line.substr(0, comma).c_str(), nullptr),
                                 std::strtod(line.substr(comma + 1).c_str(), nullptr));
    }
    return table;
  }
  throw ConfigError("envelope table needs samples, expr, csv, or unbounded");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  return parse_config(json_text, "");
}

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    RunConfig config;
    config.base_dir = base_dir;
    config.mode = root.at("mode").get<std::string>();
    if (config.mode != "scan" && config.mode != "trace" && config.mode != "envelope" &&
        config.mode != "oracle" && config.mode != "pseudo")
      throw ConfigError("unknown mode: " + config.mode);

    if (root.contains("problem")) {
      const json& p = root["problem"];
      ProblemSpec spec;
      spec.g = parse_coeff(p.at("g").get<std::string>());
      config.problem_sources.push_back(spec.g.print());
      for (const json& f : p.at("f")) {
        spec.f.push_back(parse_coeff(f.get<std::string>()));
        config.problem_sources.push_back(spec.f.back().print());
      }
      if (spec.f.empty()) throw ConfigError("problem needs at least one coefficient");
      if (p.contains("holomorphic_independent"))
        spec.holomorphic_independent = p["holomorphic_independent"].get<bool>();
      config.problem = std::move(spec);
    }

    if (root.contains("envelopes"))
      for (const auto& [name, node] : root["envelopes"].items())
        config.envelopes[name] = parse_envelope_table(node, base_dir);

    if (root.contains("region")) {
      const json& r = root["region"];
      RegionConfig region;
      for (const json& axis : r.at("axes")) {
        Interval interval{parse_number(axis.at("lo"), "axis lo"),
                          parse_number(axis.at("hi"), "axis hi")};
        if (interval.lo > interval.hi) throw ConfigError("axis lo exceeds hi");
        region.axes.push_back(interval);
      }
      if (r.contains("constraints")) {
        for (const json& c : r["constraints"]) {
          ConstraintConfig constraint;
          const std::string type = c.value("type", "relation");
          if (type == "relation") {
            constraint.type = ConstraintConfig::Type::Relation;
            const std::string dir = c.at("direction").get<std::string>();
            if (dir == "<=")
              constraint.dir = ScalarConstraint::Dir::Le;
            else if (dir == ">=")
              constraint.dir = ScalarConstraint::Dir::Ge;
            else
              throw ConfigError("constraint direction must be <= or >=");
            if (c.contains("offset")) constraint.offset = parse_number(c["offset"], "offset");
          } else if (type == "domination") {
            constraint.type = ConstraintConfig::Type::Domination;
            constraint.gamma = parse_number(c.at("gamma"), "gamma");
          } else {
            throw ConfigError("constraint type must be relation or domination");
          }
          constraint.target = c.at("target").get<int>();
          for (const json& term : c.at("terms")) {
            const std::string id = term.at("envelope").get<std::string>();
            if (!config.envelopes.count(id))
              throw ConfigError("unresolved envelope reference: " + id);
            constraint.terms.emplace_back(term.at("axis").get<int>(), id);
          }
          region.constraints.push_back(std::move(constraint));
        }
      }
      config.region = std::move(region);
    }

    if (root.contains("window")) {
      const json& w = root["window"];
      Window window;
      window.re_min = parse_number(w.at("re_min"), "re_min");
      window.re_max = parse_number(w.at("re_max"), "re_max");
      window.im_min = parse_number(w.at("im_min"), "im_min");
      window.im_max = parse_number(w.at("im_max"), "im_max");
      window.nx = w.at("nx").get<int>();
      window.ny = w.at("ny").get<int>();
      window.validate();
      config.window = window;
    }

    if (root.contains("eps_levels"))
      for (const json& level : root["eps_levels"])
        config.eps_levels.push_back(parse_number(level, "eps level"));

    if (root.contains("tolerances")) {
      const json& t = root["tolerances"];
      if (t.contains("tau")) config.tau = parse_number(t["tau"], "tau");
      if (t.contains("endpoint"))
        config.endpoint_tol = parse_number(t["endpoint"], "endpoint tolerance");
      if (config.tau <= 0.0 || config.endpoint_tol <= 0.0)
        throw ConfigError("tolerances must be positive");
    }

    config.seed = root.value("seed", std::uint64_t{1});
    config.threads = root.value("threads", 1);
    config.skeleton_flag = root.value("skeleton_flag", false);

    if (root.contains("output")) {
      const json& o = root["output"];
      config.out_csv = o.value("csv", "");
      config.out_ppm = o.value("ppm", "");
      config.out_table = o.value("table", "");
      config.out_report = o.value("report", "report.txt");
    }

    if (root.contains("trace")) {
      const json& t = root["trace"];
      config.trace_level = parse_number(t.at("level"), "trace level");
      for (const json& ray : t.at("rays"))
        config.rays.push_back(
            {parse_complex(ray.at("from"), "ray from"), parse_complex(ray.at("to"), "ray to")});
    }

    if (root.contains("envelope")) {
      const json& e = root["envelope"];
      EnvelopeJob job;
      if (e.contains("family")) {
        FamilyConfig family;
        const json& f = e["family"];
        family.slope = f.at("slope").get<std::string>();
        family.intercept = f.at("intercept").get<std::string>();
        (void)parse_coeff(family.slope);
        (void)parse_coeff(family.intercept);
        for (const json& range : f.at("s_grid")) family.s_ranges.push_back(parse_grid(range, "s grid"));
        family.alpha = parse_grid(f.at("alpha"), "alpha grid");
        job.family = std::move(family);
      } else {
        job.table = e.at("table").get<std::string>();
        job.kind = e.value("kind", "upper");
        if (job.kind != "upper" && job.kind != "lower")
          throw ConfigError("envelope kind must be upper or lower");
        if (!config.envelopes.count(job.table))
          throw ConfigError("unresolved envelope reference: " + job.table);
      }
      config.envelope_job = std::move(job);
    }

    if (root.contains("oracle")) {
      const json& o = root["oracle"];
      OracleJob job;
      for (const json& m : o.at("matrices")) job.matrix_files.push_back(m.get<std::string>());
      job.samples = o.value("samples", 1000);
      if (o.contains("checks"))
        for (const json& c : o["checks"]) job.checks.push_back(c.get<std::string>());
      config.oracle_job = std::move(job);
    }

    if (root.contains("pseudo"))
      for (const json& p : root["pseudo"].at("points"))
        config.pseudo_points.push_back(parse_complex(p, "pseudo point"));

    // mode requirements
    if (config.mode == "scan" || config.mode == "trace" || config.mode == "pseudo" ||
        config.mode == "oracle") {
      if (!config.problem) throw ConfigError(config.mode + " mode needs a problem");
      if (!config.region) throw ConfigError(config.mode + " mode needs a region");
      if (config.region->axes.size() != static_cast<std::size_t>(config.problem->n()))
        throw ConfigError("region dimension does not match problem");
    }
    if (config.mode == "scan" && !config.window) throw ConfigError("scan mode needs a window");
    if (config.mode == "trace" && config.rays.empty())
      throw ConfigError("trace mode needs rays");
    if (config.mode == "envelope" && !config.envelope_job)
      throw ConfigError("envelope mode needs an envelope job");
    if (config.mode == "oracle" && !config.oracle_job)
      throw ConfigError("oracle mode needs an oracle job");
    if (config.mode == "pseudo" && config.pseudo_points.empty())
      throw ConfigError("pseudo mode needs points");
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config structure error: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), fs::path(path).parent_path().string());
}

std::string print_config(const RunConfig& config) {
  json root;
  root["mode"] = config.mode;
  if (config.problem) {
    json p;
    p["g"] = config.problem->g.print();
    json fs_arr = json::array();
    for (const CoeffExpr& f : config.problem->f) fs_arr.push_back(f.print());
    p["f"] = fs_arr;
    p["holomorphic_independent"] = config.problem->holomorphic_independent;
    root["problem"] = p;
  }
  if (!config.envelopes.empty()) {
    json envs;
    for (const auto& [name, table] : config.envelopes) {
      json e;
      if (table.unbounded) {
        e["unbounded"] = true;
      } else {
        json samples = json::array();
        for (const auto& [x, y] : table.samples)
          samples.push_back(json::array({format_number(x), format_number(y)}));
        e["samples"] = samples;
      }
      envs[name] = e;
    }
    root["envelopes"] = envs;
  }
  if (config.region) {
    json r;
    json axes = json::array();
    for (const Interval& axis : config.region->axes)
      axes.push_back({{"lo", format_number(axis.lo)}, {"hi", format_number(axis.hi)}});
    r["axes"] = axes;
    if (!config.region->constraints.empty()) {
      json cs = json::array();
      for (const ConstraintConfig& c : config.region->constraints) {
        json node;
        node["target"] = c.target;
        if (c.type == ConstraintConfig::Type::Relation) {
          node["type"] = "relation";
          node["direction"] = c.dir == ScalarConstraint::Dir::Le ? "<=" : ">=";
          node["offset"] = format_number(c.offset);
        } else {
          node["type"] = "domination";
          node["gamma"] = format_number(c.gamma);
        }
        json terms = json::array();
        for (const auto& [axis, id] : c.terms)
          terms.push_back({{"axis", axis}, {"envelope", id}});
        node["terms"] = terms;
        cs.push_back(node);
      }
      r["constraints"] = cs;
    }
    root["region"] = r;
  }
  if (config.window) {
    root["window"] = {{"re_min", format_number(config.window->re_min)},
                      {"re_max", format_number(config.window->re_max)},
                      {"im_min", format_number(config.window->im_min)},
                      {"im_max", format_number(config.window->im_max)},
                      {"nx", config.window->nx},
                      {"ny", config.window->ny}};
  }
  if (!config.eps_levels.empty()) {
    json levels = json::array();
    for (double level : config.eps_levels) levels.push_back(format_number(level));
    root["eps_levels"] = levels;
  }
  root["tolerances"] = {{"tau", format_number(config.tau)},
                        {"endpoint", format_number(config.endpoint_tol)}};
  root["seed"] = config.seed;
  root["threads"] = config.threads;
  root["skeleton_flag"] = config.skeleton_flag;
  json output;
  if (!config.out_csv.empty()) output["csv"] = config.out_csv;
  if (!config.out_ppm.empty()) output["ppm"] = config.out_ppm;
  if (!config.out_table.empty()) output["table"] = config.out_table;
  output["report"] = config.out_report;
  root["output"] = output;
  if (!config.rays.empty()) {
    json rays = json::array();
    for (const TraceRay& ray : config.rays)
      rays.push_back({{"from", json::array({format_number(ray.from.real()),
                                            format_number(ray.from.imag())})},
                      {"to", json::array({format_number(ray.to.real()),
                                          format_number(ray.to.imag())})}});
    root["trace"] = {{"level", format_number(config.trace_level)}, {"rays", rays}};
  }
  if (config.envelope_job) {
    json e;
    if (config.envelope_job->family) {
      const FamilyConfig& family = *config.envelope_job->family;
      json ranges = json::array();
      for (const GridSpec& range : family.s_ranges)
        ranges.push_back({{"min", format_number(range.min)},
                          {"max", format_number(range.max)},
                          {"step", format_number(range.step)}});
      e["family"] = {{"slope", family.slope},
                     {"intercept", family.intercept},
                     {"s_grid", ranges},
                     {"alpha",
                      {{"min", format_number(family.alpha.min)},
                       {"max", format_number(family.alpha.max)},
                       {"step", format_number(family.alpha.step)}}}};
    } else {
      e["table"] = config.envelope_job->table;
      e["kind"] = config.envelope_job->kind;
    }
    root["envelope"] = e;
  }
  if (config.oracle_job) {
    json o;
    o["matrices"] = config.oracle_job->matrix_files;
    o["samples"] = config.oracle_job->samples;
    o["checks"] = config.oracle_job->checks;
    root["oracle"] = o;
  }
  if (!config.pseudo_points.empty()) {
    json points = json::array();
    for (Complex p : config.pseudo_points)
      points.push_back(json::array({format_number(p.real()), format_number(p.imag())}));
    root["pseudo"] = {{"points", points}};
  }
  return root.dump(2) + "\n";
}

Region build_region(const RunConfig& config) {
  if (!config.region) throw ConfigError("config has no region");
  Region region(config.region->axes);
  for (const ConstraintConfig& c : config.region->constraints) {
    std::vector<EnvelopeSource> sources;
    for (const auto& [axis, id] : c.terms) {
      const EnvelopeTable& table = config.envelopes.at(id);
      EnvelopeSource source;
      source.axis = axis;
      source.samples = table.samples;
      source.unbounded = table.unbounded;
      sources.push_back(std::move(source));
    }
    if (c.type == ConstraintConfig::Type::Relation) {
      RelationSpec spec;
      spec.target = c.target;
      spec.dir = c.dir;
      spec.offset = c.offset;
      spec.terms = std::move(sources);
      region.constraints.push_back(relation_constraint(spec, region.box));
    } else {
      DominationSpec spec;
      spec.target = c.target;
      spec.gamma = c.gamma;
      spec.terms = std::move(sources);
      auto [upper, lower] = domination_constraint(spec, region.box);
      region.constraints.push_back(std::move(upper));
      region.constraints.push_back(std::move(lower));
    }
  }
  return region;
}

// ---------------------------------------------------------------------------
// Mode execution.

namespace {

struct RunReport {
  std::vector<std::string> lines;
  std::vector<std::string> flags;

  void note(std::string line) { lines.push_back(std::move(line)); }
  void flag(std::string line) { flags.push_back(std::move(line)); }
};

void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp);
    out << text;
  }
  fs::rename(tmp, path);
}

std::string resolve(const std::string& out_dir, const std::string& path) {
  if (path.empty()) return path;
  const fs::path p(path);
  if (p.is_absolute() || out_dir.empty()) return path;
  return (fs::path(out_dir) / p).string();
}

void run_scan(const RunConfig& config, const std::string& out_dir, RunReport& report) {
  ScanOptions options;
  options.tau = config.tau;
  options.threads = config.threads;
  options.skeleton_flag = config.skeleton_flag;
  const Region region = build_region(config);
  const ScanField field =
      scan_grid(*config.problem, region, *config.window, config.eps_levels, options);
  report.note("cells: " + std::to_string(field.cells.size()));
  report.note("undefined cells: " + std::to_string(field.undefined_cells));
  if (!config.out_csv.empty()) {
    write_csv(field, resolve(out_dir, config.out_csv));
    report.note("csv: " + config.out_csv);
  }
  if (!config.out_ppm.empty()) {
    write_ppm(field, resolve(out_dir, config.out_ppm));
    report.note("ppm: " + config.out_ppm);
  }
}

void run_trace(const RunConfig& config, const std::string& out_dir, RunReport& report) {
  const Region region = build_region(config);
  const double level = config.trace_level;
  if (!(level > 0.0)) throw ConfigError("trace level must be positive");
  std::string csv = "ray,re,im,eps\n";
  int found = 0;
  for (std::size_t r = 0; r < config.rays.size(); ++r) {
    const TraceRay& ray = config.rays[r];
    auto value = [&](double t) {
      const Complex w = ray.from + t * (ray.to - ray.from);
      return eps_omega(*config.problem, region, w).eps - level;
    };
    constexpr int kSamples = 256;
    double prev_t = 0.0;
    double prev_v = value(0.0);
    for (int k = 1; k <= kSamples; ++k) {
      const double t = static_cast<double>(k) / kSamples;
      const double v = value(t);
      if ((prev_v < 0.0) != (v < 0.0)) {
        double a = prev_t, b = t;
        const double span = std::abs(ray.to - ray.from);
        while ((b - a) * span > 1e-8) {
          const double mid = 0.5 * (a + b);
          ((value(a) < 0.0) != (value(mid) < 0.0)) ? b = mid : a = mid;
        }
        const Complex w = ray.from + 0.5 * (a + b) * (ray.to - ray.from);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", r, w.real(), w.imag(),
                      eps_omega(*config.problem, region, w).eps);
        csv += buf;
        ++found;
      }
      prev_t = t;
      prev_v = v;
    }
  }
  report.note("crossings: " + std::to_string(found));
  if (config.out_csv.empty()) throw ConfigError("trace mode needs output.csv");
  atomic_write_text(resolve(out_dir, config.out_csv), csv);
}

void run_envelope(const RunConfig& config, const std::string& out_dir, RunReport& report) {
  const EnvelopeJob& job = *config.envelope_job;
  if (config.out_table.empty()) throw ConfigError("envelope mode needs output.table");
  std::string csv = "x,value\n";
  char buf[80];
  if (job.family) {
    const FamilyConfig& family = *job.family;
    const CoeffExpr slope = parse_coeff(family.slope);
    const CoeffExpr intercept = parse_coeff(family.intercept);
    std::vector<double> s_grid;
    for (const GridSpec& range : family.s_ranges)
      for (double s : range.values()) s_grid.push_back(s);
    auto bound = [&](double s) -> AffineBound {
      const Complex w(s, 0.0);
      return {slope.eval(w).real(), intercept.eval(w).real()};
    };
    for (double alpha : family.alpha.values()) {
      const double value = affine_family_min(bound, s_grid, alpha);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", alpha, value);
      csv += buf;
    }
    report.note("family grid points: " + std::to_string(s_grid.size()));
  } else {
    const EnvelopeTable& table = config.envelopes.at(job.table);
    if (table.unbounded) throw ConfigError("cannot tabulate an unbounded envelope");
    const Interval domain{table.samples.front().first, table.samples.back().first};
    const EnvelopeFn env = job.kind == "upper"
                               ? upper_envelope(table.samples, domain, false)
                               : lower_envelope(table.samples, domain);
    for (const auto& [x, y] : env.breakpoints) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, y);
      csv += buf;
    }
    report.note("breakpoints: " + std::to_string(env.breakpoints.size()));
  }
  atomic_write_text(resolve(out_dir, config.out_table), csv);
}

void run_oracle(const RunConfig& config, const std::string& out_dir, RunReport& report) {
  (void)out_dir;
  const OracleJob& job = *config.oracle_job;
  std::vector<HermMatrix> mats;
  for (const std::string& file : job.matrix_files)
    mats.push_back(read_matrix_csv(resolve(config.base_dir, file)));
  if (static_cast<int>(mats.size()) != config.problem->n())
    throw ConfigError("matrix count does not match problem");
  Region region = build_region(config);
  for (int j = 0; j < config.problem->n(); ++j) {
    const Interval range = numerical_range_interval(mats[j]);
    if (!region.box[j].contains(range.lo) || !region.box[j].contains(range.hi))
      report.flag("numerical range of matrix " + std::to_string(j) +
                  " is not inside the region box");
  }

  auto wants = [&](const char* check) {
    return job.checks.empty() ||
           std::find(job.checks.begin(), job.checks.end(), check) != job.checks.end();
  };

  if (wants("joint_range")) {
    const auto points = sample_joint_range(mats, job.samples, config.seed);
    int violations = 0;
    for (const auto& point : points)
      if (!contains(region, point, 1e-8)) ++violations;
    report.note("joint_range: " + std::to_string(violations) + " violations / " +
                std::to_string(points.size()) + " samples");
    if (violations) report.flag("joint range samples escaped the region");
  }

  if (wants("containment")) {
    const auto roots = sample_wt(mats, *config.problem, job.samples, config.seed + 1);
    int violations = 0;
    for (Complex root : roots) {
      const MembershipResult m = membership_general(*config.problem, region, root, config.tau);
      if (m.status == Status::Outside) ++violations;
    }
    report.note("containment: " + std::to_string(violations) + " violations / " +
                std::to_string(roots.size()) + " roots");
    if (violations) report.flag("sampled numerical range points escaped the enclosure");
  }

  if (wants("resolvent")) {
    // exterior points on a ring around the window of sampled roots
    const auto roots = sample_wt(mats, *config.problem, std::min(job.samples, 50),
                                 config.seed + 2);
    double radius = 1.0;
    for (Complex root : roots) radius = std::max(radius, std::abs(root));
    radius *= 1.5;
    int checked = 0;
    int violations = 0;
    UnitVectorSampler angles(1, config.seed + 3);
    for (int k = 0; k < job.samples && checked < job.samples; ++k) {
      const std::vector<Complex> dir = angles.next();
      const Complex w = radius * dir[0] / std::abs(dir[0]);
      const double eps = eps_omega(*config.problem, region, w).eps;
      if (eps <= 1e-6) continue;
      const double norm = resolvent_norm(mats, *config.problem, w);
      ++checked;
      if (norm * eps > 1.0 + 1e-6) ++violations;
    }
    report.note("resolvent: " + std::to_string(violations) + " violations / " +
                std::to_string(checked) + " exterior points");
    if (violations) report.flag("resolvent estimate exceeded 1/eps");
  }
}

void run_pseudo(const RunConfig& config, const std::string& out_dir, RunReport& report) {
  const Region region = build_region(config);
  if (config.out_csv.empty()) throw ConfigError("pseudo mode needs output.csv");
  std::string csv = "re,im,eps,bound\n";
  char buf[128];
  for (Complex w : config.pseudo_points) {
    const LsqResult lsq = eps_omega(*config.problem, region, w);
    const double bound = lsq.eps > 0.0 ? 1.0 / lsq.eps : kInf;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%s\n", w.real(), w.imag(), lsq.eps,
                  bound == kInf ? "inf" : format_number(bound).c_str());
    csv += buf;
    if (!lsq.certified) report.flag("non-certified least-squares solve");
  }
  report.note("points: " + std::to_string(config.pseudo_points.size()));
  atomic_write_text(resolve(out_dir, config.out_csv), csv);
}

}  // namespace

int run(const RunConfig& config, const std::string& out_dir) {
  if (!out_dir.empty()) fs::create_directories(out_dir);
  RunReport report;
  const auto start = std::chrono::steady_clock::now();

  if (config.mode == "scan")
    run_scan(config, out_dir, report);
  else if (config.mode == "trace")
    run_trace(config, out_dir, report);
  else if (config.mode == "envelope")
    run_envelope(config, out_dir, report);
  else if (config.mode == "oracle")
    run_oracle(config, out_dir, report);
  else if (config.mode == "pseudo")
    run_pseudo(config, out_dir, report);
  else
    throw ConfigError("unknown mode: " + config.mode);

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  std::string text = "mode: " + config.mode + "\n";
  text += "tau: " + format_number(config.tau) + "\n";
  text += "endpoint_tol: " + format_number(config.endpoint_tol) + "\n";
  text += "seed: " + std::to_string(config.seed) + "\n";
  text += "threads: " + std::to_string(config.threads) + "\n";
  for (const std::string& line : report.lines) text += line + "\n";
  text += "elapsed_ms: " + std::to_string(elapsed.count()) + "\n";
  if (report.flags.empty()) {
    text += "flags: none\n";
  } else {
    for (const std::string& flag : report.flags) text += "flag: " + flag + "\n";
  }
  atomic_write_text(resolve(out_dir, config.out_report), text);
  return report.flags.empty() ? 0 : 3;
}

}  // namespace specrange
