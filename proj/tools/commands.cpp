#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadkde/dyadic_sample.hpp"
#include "dyadkde/errors.hpp"
#include "dyadkde/estimator.hpp"
#include "dyadkde/montecarlo.hpp"
#include "edge_csv.hpp"

namespace dyadkde::cli {

namespace {

using nlohmann::ordered_json;

std::string num(double v, int digits = 10) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// JSON cannot hold infinities; they are written as strings.
ordered_json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

std::vector<Method> parse_methods(const std::string& s) {
  std::vector<Method> out;
  for (const auto& name : split_list(s)) {
    const auto m = method_from_name(name);
    if (!m) throw InputError("unknown method '" + name + "' (expected jel, mjel, mjk)");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw InputError("no methods given");
  return out;
}

KernelSpec parse_kernel(const std::string& s) {
  const auto k = kernel_from_name(s);
  if (!k) throw InputError("unknown kernel '" + s + "'");
  return *k;
}

SummaryStat parse_stat(const std::string& s) {
  if (s == "mean") return SummaryStat::Mean;
  if (s == "p95") return SummaryStat::P95;
  if (s == "max") return SummaryStat::Max;
  throw InputError("unknown aggregate '" + s + "' (expected mean, p95, max)");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0,1)");
}

// Options shared by the commands that read an edge list.
struct InputOptions {
  std::string path;
  std::string aggregate;
  std::size_t vertex_count = 0;
  std::string kernel = "epanechnikov";
  std::string format = "text";

  void add_to(CLI::App& app, bool with_kernel = true) {
    app.add_option("csv", path, "Edge list CSV with header i,j,value")->required();
    app.add_option("--aggregate", aggregate, "Collapse repeated pairs: mean, p95, max");
    app.add_option("--n", vertex_count, "Vertex count (integer labels 1..n)");
    if (with_kernel) app.add_option("--kernel", kernel, "epanechnikov, triangular, uniform");
    app.add_option("--format", format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
  }
};

struct LoadedSample {
  EdgeTable table;
  DyadicSample sample;
};

LoadedSample load(const InputOptions& opt) {
  EdgeTable table = read_edge_csv_file(
      opt.path, opt.vertex_count > 0 ? std::optional<std::size_t>(opt.vertex_count) : std::nullopt);
  if (table.n < 2) throw InputError("need at least 2 vertices");
  DyadicSample sample = opt.aggregate.empty()
                            ? from_edge_list(table.records, table.n)
                            : aggregate_multi_records(table.records, parse_stat(opt.aggregate),
                                                      table.n);
  return {std::move(table), std::move(sample)};
}

struct BandwidthUsed {
  double h;
  std::string rule;
};

BandwidthUsed choose_bandwidth(const DyadicSample& sample, std::optional<double> h) {
  if (h) {
    if (!(*h > 0.0)) throw Error(ErrorKind::NonPositiveBandwidth, "h = " + num(*h));
    return {*h, "fixed"};
  }
  if (sample.complete()) return {rot_bandwidth(sample), "rot-complete"};
  return {rot_bandwidth_incomplete(sample), "rot-incomplete"};
}

ordered_json metadata(const LoadedSample& s, const InputOptions& opt) {
  ordered_json m;
  m["n"] = s.sample.n();
  m["observed_edges"] = s.sample.observed_count();
  m["p_hat"] = observed_fraction(s.sample);
  m["kernel"] = std::string(kernel_name(parse_kernel(opt.kernel).family));
  if (!opt.aggregate.empty()) m["aggregate"] = opt.aggregate;
  ordered_json labels = ordered_json::object();
  for (std::size_t k = 0; k < s.table.labels.size(); ++k) labels[s.table.labels[k]] = k + 1;
  m["vertex_ids"] = labels;
  return m;
}

void print_sample_lines(std::ostream& out, const LoadedSample& s) {
  out << "n: " << s.sample.n() << '\n'
      << "observed edges: " << s.sample.observed_count() << '\n'
      << "p_hat: " << num(observed_fraction(s.sample)) << '\n';
}

// ---------------------------------------------------------------- estimate

struct EstimateCmd {
  InputOptions in;
  double x = 0.0;
  std::optional<double> h;

  void setup(CLI::App& app) {
    in.add_to(app);
    app.add_option("--x", x, "Design point")->required();
    app.add_option("--h", h, "Bandwidth (rule of thumb when omitted)");
  }

  int exec(std::ostream& out) const {
    const auto s = load(in);
    const KernelSpec kernel = parse_kernel(in.kernel);
    const auto bw = choose_bandwidth(s.sample, h);
    const KernelSums sums = kernel_sums(s.sample, kernel, x, bw.h);
    const bool complete = s.sample.complete();
    const double theta = complete ? density_estimate(sums) : density_estimate_incomplete(sums);
    if (in.format == "json") {
      ordered_json j;
      j["x"] = x;
      j["theta_hat"] = theta;
      j["estimator"] = complete ? "complete" : "incomplete";
      j["bandwidth"] = bw.h;
      j["bandwidth_rule"] = bw.rule;
      j["metadata"] = metadata(s, in);
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (in.format == "csv") {
      out << "x,theta_hat,estimator,bandwidth,bandwidth_rule,n,observed_edges,p_hat\n"
          << num(x, 17) << ',' << num(theta, 17) << ',' << (complete ? "complete" : "incomplete")
          << ',' << num(bw.h, 17) << ',' << bw.rule << ',' << s.sample.n() << ','
          << s.sample.observed_count() << ',' << num(observed_fraction(s.sample), 17) << '\n';
      return kExitOk;
    }
    out << "theta_hat: " << num(theta) << '\n'
        << "estimator: " << (complete ? "complete" : "incomplete") << '\n'
        << "x: " << num(x) << '\n'
        << "bandwidth: " << num(bw.h) << '\n'
        << "bandwidth rule: " << bw.rule << '\n';
    print_sample_lines(out, s);
    out << "kernel: " << kernel_name(kernel.family) << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------------- bandwidth

struct BandwidthCmd {
  InputOptions in;

  void setup(CLI::App& app) { in.add_to(app, false); }

  int exec(std::ostream& out) const {
    const auto s = load(in);
    const auto bw = choose_bandwidth(s.sample, std::nullopt);
    if (in.format == "json") {
      ordered_json j;
      j["bandwidth"] = bw.h;
      j["bandwidth_rule"] = bw.rule;
      j["metadata"] = metadata(s, in);
      out << j.dump(2) << '\n';
    } else if (in.format == "csv") {
      out << "bandwidth,bandwidth_rule,n,observed_edges,p_hat\n"
          << num(bw.h, 17) << ',' << bw.rule << ',' << s.sample.n() << ','
          << s.sample.observed_count() << ',' << num(observed_fraction(s.sample), 17) << '\n';
    } else {
      out << "bandwidth: " << num(bw.h) << '\n' << "bandwidth rule: " << bw.rule << '\n';
      print_sample_lines(out, s);
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- ci

struct CiCmd {
  InputOptions in;
  double x = 0.0;
  double alpha = 0.05;
  std::string method = "mjel";
  std::optional<double> h;
  bool scan = false;

  void setup(CLI::App& app) {
    in.add_to(app);
    app.add_option("--x", x, "Design point")->required();
    app.add_option("--alpha", alpha, "Significance level in (0,1)");
    app.add_option("--method", method, "jel, mjel or mjk");
    app.add_option("--h", h, "Bandwidth (rule of thumb when omitted)");
    app.add_flag("--scan", scan, "Print a 201-point statistic profile around the interval");
  }

  int exec(std::ostream& out, std::ostream& err) const {
    check_alpha(alpha);
    const auto m = method_from_name(method);
    if (!m) throw InputError("unknown method '" + method + "'");
    const auto s = load(in);
    const KernelSpec kernel = parse_kernel(in.kernel);
    const auto bw = choose_bandwidth(s.sample, h);
    const PointInference inf(s.sample, kernel, x, bw.h);
    const InferenceResult r = inf.invert_test(alpha, *m);
    const char* crit_name = *m == Method::MJKWald ? "z_alpha/2" : "c_alpha";

    std::vector<ProfilePoint> profile;
    std::size_t crossings = 0;
    if (scan) {
      const double width = std::max(r.upper - r.lower, 1e-6);
      const double lo = std::max(0.0, r.lower - width);
      const double hi = r.upper + width;
      const Method scan_method = *m;
      profile = inf.statistic_profile(scan_method, lo, hi, 201);
      const double level = *m == Method::MJKWald ? r.critical_value * r.critical_value
                                                 : r.critical_value;
      crossings = count_crossings(profile, level);
      const std::size_t expected = r.lower == 0.0 && lo == 0.0 ? 1 : 2;
      if (crossings > expected) {
        err << "warning: statistic crosses the critical value " << crossings
            << " times on the scan grid; the region may not be an interval\n";
      }
    }

    if (in.format == "json") {
      ordered_json j;
      j["method"] = std::string(method_name(r.method));
      j["x"] = x;
      j["theta_hat"] = r.theta_hat;
      j["lower"] = json_num(r.lower);
      j["upper"] = json_num(r.upper);
      j["statistic_at_theta_hat"] = r.statistic;
      j["alpha"] = r.alpha;
      j["critical_value"] = r.critical_value;
      j["critical_value_kind"] = crit_name;
      j["gamma_m_sq"] = inf.gamma_m_sq();
      j["bandwidth"] = bw.h;
      j["bandwidth_rule"] = bw.rule;
      j["estimator"] = inf.incomplete() ? "incomplete" : "complete";
      j["metadata"] = metadata(s, in);
      if (scan) {
        ordered_json pts = ordered_json::array();
        for (const auto& p : profile) pts.push_back({json_num(p.theta), json_num(p.statistic)});
        j["scan"] = {{"crossings", crossings}, {"points", pts}};
      }
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    if (in.format == "csv") {
      out << "method,x,theta_hat,lower,upper,statistic_at_theta_hat,alpha,critical_value,bandwidth\n"
          << method_name(r.method) << ',' << num(x, 17) << ',' << num(r.theta_hat, 17) << ','
          << num(r.lower, 17) << ',' << num(r.upper, 17) << ',' << num(r.statistic, 17) << ','
          << num(r.alpha, 17) << ',' << num(r.critical_value, 17) << ',' << num(bw.h, 17)
          << '\n';
      return kExitOk;
    }
    out << "method: " << method_name(r.method) << '\n'
        << "interval: [" << num(r.lower) << ", " << num(r.upper) << "]\n"
        << "theta_hat: " << num(r.theta_hat) << '\n'
        << "statistic at theta_hat: " << num(r.statistic) << '\n'
        << crit_name << ": " << num(r.critical_value) << '\n'
        << "alpha: " << num(r.alpha) << '\n'
        << "x: " << num(x) << '\n'
        << "bandwidth: " << num(bw.h) << '\n'
        << "bandwidth rule: " << bw.rule << '\n'
        << "estimator: " << (inf.incomplete() ? "incomplete" : "complete") << '\n';
    print_sample_lines(out, s);
    if (scan) {
      out << "scan crossings: " << crossings << '\n' << "scan theta,statistic\n";
      for (const auto& p : profile) out << num(p.theta) << ',' << num(p.statistic) << '\n';
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- profile

struct ProfileCmd {
  InputOptions in;
  std::string grid;
  double alpha = 0.05;
  std::string methods = "jel,mjel";
  std::optional<double> h;
  std::size_t threads = 0;

  void setup(CLI::App& app) {
    in.add_to(app);
    app.add_option("--grid", grid, "min:max:step or a comma-separated list")->required();
    app.add_option("--alpha", alpha, "Significance level in (0,1)");
    app.add_option("--methods", methods, "Comma-separated subset of jel,mjel,mjk");
    app.add_option("--h", h, "Bandwidth (rule of thumb when omitted)");
    app.add_option("--threads", threads, "Worker threads (0: DYADKDE_THREADS or all cores)");
  }

  int exec(std::ostream& out) const {
    check_alpha(alpha);
    const auto xs = parse_grid(grid);
    const auto ms = parse_methods(methods);
    const auto s = load(in);
    const KernelSpec kernel = parse_kernel(in.kernel);
    const auto bw = choose_bandwidth(s.sample, h);

    std::vector<ProfileRow> rows(xs.size() * ms.size());
    parallel_for(xs.size(), resolve_threads(threads), [&](std::size_t k) {
      std::optional<PointInference> inf;
      std::string setup_failure;
      try {
        inf.emplace(s.sample, kernel, xs[k], bw.h);
      } catch (const Error& e) {
        setup_failure = std::string(error_name(e.kind()));
      }
      for (std::size_t m = 0; m < ms.size(); ++m) {
        ProfileRow& row = rows[k * ms.size() + m];
        row.x = xs[k];
        row.method = ms[m];
        row.h = bw.h;
        if (!inf) {
          row.failure = setup_failure;
          continue;
        }
        row.theta_hat = inf->theta_hat();
        try {
          const InferenceResult r = inf->invert_test(alpha, ms[m]);
          row.lower = std::max(r.lower, 0.0);
          row.upper = r.upper;
        } catch (const Error& e) {
          row.failure = std::string(error_name(e.kind()));
          row.lower = row.upper = std::nan("");
        }
      }
    });
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ProfileRow& a, const ProfileRow& b) { return a.x < b.x; });
    const bool any_ok =
        std::any_of(rows.begin(), rows.end(), [](const ProfileRow& r) { return !r.failure; });

    if (in.format == "json") {
      ordered_json j;
      j["alpha"] = alpha;
      j["bandwidth"] = bw.h;
      j["bandwidth_rule"] = bw.rule;
      j["estimator"] = s.sample.complete() ? "complete" : "incomplete";
      j["metadata"] = metadata(s, in);
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows) {
        ordered_json row;
        row["x"] = r.x;
        row["method"] = std::string(method_name(r.method));
        row["theta_hat"] = r.theta_hat;
        row["lower"] = json_num(r.lower);
        row["upper"] = json_num(r.upper);
        row["h"] = r.h;
        row["status"] = r.failure ? *r.failure : "ok";
        arr.push_back(row);
      }
      j["rows"] = arr;
      out << j.dump(2) << '\n';
    } else if (in.format == "csv") {
      out << "x,method,theta_hat,lower,upper,h,status\n";
      for (const auto& r : rows) {
        out << num(r.x, 17) << ',' << method_name(r.method) << ',' << num(r.theta_hat, 17) << ','
            << (r.failure ? "" : num(r.lower, 17)) << ',' << (r.failure ? "" : num(r.upper, 17))
            << ',' << num(r.h, 17) << ',' << (r.failure ? *r.failure : "ok") << '\n';
      }
    } else {
      out << "# n=" << s.sample.n() << " observed=" << s.sample.observed_count()
          << " p_hat=" << num(observed_fraction(s.sample)) << " alpha=" << num(alpha)
          << " kernel=" << kernel_name(kernel.family) << " h=" << num(bw.h) << " ("
          << bw.rule << ")\n";
      char line[256];
      std::snprintf(line, sizeof line, "%12s %6s %14s %14s %14s  %s\n", "x", "method",
                    "theta_hat", "lower", "upper", "status");
      out << line;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%12.6g %6s %14.8g %14.8g %14.8g  %s\n", r.x,
                      std::string(method_name(r.method)).c_str(), r.theta_hat, r.lower, r.upper,
                      r.failure ? r.failure->c_str() : "ok");
        out << line;
      }
    }
    return any_ok ? kExitOk : kExitDomain;
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  std::string config_file;
  std::string out_dir = ".";
  std::string format = "text";
  // Raw strings so a config file can fill whatever the flags leave unset.
  std::map<std::string, std::string> flags;
  CLI::App* app = nullptr;

  static constexpr const char* kKeys[] = {"beta",  "n",       "p",         "reps",
                                          "alpha", "x",       "seed",      "methods",
                                          "bandwidth", "kernel", "threads"};

  void setup(CLI::App& sub) {
    app = &sub;
    sub.add_option("--config", config_file, "key=value file; flags override it");
    sub.add_option("--out", out_dir, "Directory for coverage.json");
    sub.add_option("--format", format, "Console output: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    for (const char* key : kKeys) sub.add_option(std::string("--") + key, flags[key]);
  }

  std::map<std::string, std::string> merged() const {
    std::map<std::string, std::string> values = {
        {"beta", "1"},      {"n", "100"},         {"p", "1"},
        {"reps", "1000"},   {"alpha", "0.05"},    {"x", "1.675"},
        {"seed", "1"},      {"methods", "jel,mjel,mjk"}, {"bandwidth", "rot"},
        {"kernel", "epanechnikov"}, {"threads", "0"}};
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw InputError("cannot open config '" + config_file + "'");
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto strip = [](std::string s) {
          const auto a = s.find_first_not_of(" \t\r");
          if (a == std::string::npos) return std::string();
          return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
        };
        if (strip(line).empty()) continue;
        if (eq == std::string::npos) {
          throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = strip(line.substr(0, eq));
        if (!values.count(key)) {
          throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                           "'");
        }
        values[key] = strip(line.substr(eq + 1));
      }
    }
    for (const char* key : kKeys) {
      if (app->get_option(std::string("--") + key)->count() > 0) values[key] = flags.at(key);
    }
    return values;
  }

  template <class T>
  static T parse_number(const std::string& key, const std::string& text) {
    std::istringstream ss(text);
    T v{};
    ss >> v;
    if (ss.fail() || !ss.eof()) throw InputError("bad value for " + key + ": '" + text + "'");
    return v;
  }

  int exec(std::ostream& out) const {
    const auto v = merged();
    SimulationConfig base;
    base.beta = parse_number<int>("beta", v.at("beta"));
    base.p = parse_number<double>("p", v.at("p"));
    base.reps = parse_number<std::size_t>("reps", v.at("reps"));
    base.alpha = parse_number<double>("alpha", v.at("alpha"));
    base.x = parse_number<double>("x", v.at("x"));
    base.base_seed = parse_number<std::uint64_t>("seed", v.at("seed"));
    base.methods = parse_methods(v.at("methods"));
    base.kernel = parse_kernel(v.at("kernel"));
    base.threads = parse_number<std::size_t>("threads", v.at("threads"));
    try {
      base.bandwidth = BandwidthChoice::parse(v.at("bandwidth"));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    std::vector<std::size_t> ns;
    for (const auto& item : split_list(v.at("n"))) ns.push_back(parse_number<std::size_t>("n", item));
    if (ns.empty()) throw InputError("n is empty");

    std::vector<CoverageReport> reports;
    for (std::size_t n : ns) {
      SimulationConfig cfg = base;
      cfg.n = n;
      try {
        cfg.validate();
      } catch (const Error& e) {
        throw InputError(e.what());
      }
      reports.push_back(coverage_experiment(cfg));
    }

    const std::string json = coverage_json(base, reports).dump(2) + "\n";
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / "coverage.json";
    {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw InputError("cannot write '" + path.string() + "'");
      f << json;
    }
    if (format == "json") {
      out << json;
    } else {
      print_table(out, base, reports);
      out << "wrote " << path.string() << '\n';
    }
    return kExitOk;
  }

  static ordered_json coverage_json(const SimulationConfig& base,
                                    const std::vector<CoverageReport>& reports) {
    ordered_json j;
    ordered_json cfg;
    cfg["beta"] = base.beta;
    cfg["p"] = base.p;
    cfg["reps"] = base.reps;
    cfg["alpha"] = base.alpha;
    cfg["x"] = base.x;
    cfg["kernel"] = std::string(kernel_name(base.kernel.family));
    cfg["bandwidth"] = base.bandwidth.name();
    cfg["seed"] = base.base_seed;
    ordered_json ms = ordered_json::array();
    for (auto m : base.methods) ms.push_back(std::string(method_name(m)));
    cfg["methods"] = ms;
    cfg["critical_value"] = chi2_critical_value(base.alpha);
    j["config"] = cfg;
    ordered_json rows = ordered_json::array();
    for (const auto& r : reports) {
      ordered_json row;
      row["n"] = r.config.n;
      row["theta_true"] = r.theta_true;
      row["mean_bandwidth"] = r.mean_bandwidth;
      ordered_json methods;
      for (const auto& mc : r.methods) {
        ordered_json m;
        m["coverage"] = mc.coverage();
        m["mc_standard_error"] = mc.mc_standard_error();
        m["covered"] = mc.covered;
        m["not_covered"] = mc.not_covered;
        m["evaluated"] = mc.evaluated();
        m["failures"] = mc.failures();
        m["infeasible"] = mc.infeasible;
        m["nonpositive_modified_variance"] = mc.nonpositive_variance;
        m["other_failures"] = mc.other_failures;
        methods[std::string(method_name(mc.method))] = m;
      }
      row["methods"] = methods;
      rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
  }

  static void print_table(std::ostream& out, const SimulationConfig& base,
                          const std::vector<CoverageReport>& reports) {
    auto label = [](Method m) -> const char* {
      switch (m) {
        case Method::JEL: return "JEL";
        case Method::MJEL: return "mJEL";
        case Method::MJKWald: return "mJK";
      }
      return "?";
    };
    out << "DGP beta=" << base.beta << "  p=" << num(base.p) << "  x=" << num(base.x)
        << "  alpha=" << num(base.alpha) << "  reps=" << base.reps << "  seed=" << base.base_seed
        << '\n'
        << "kernel: " << kernel_name(base.kernel.family) << "  bandwidth: " << base.bandwidth.name()
        << '\n';
    char cell[64];
    out << "method:  ";
    for (auto m : base.methods) {
      std::snprintf(cell, sizeof cell, "%16s", label(m));
      out << cell;
    }
    out << "   seconds\n";
    for (const auto& r : reports) {
      std::snprintf(cell, sizeof cell, "n=%-7zu", r.config.n);
      out << cell;
      for (const auto& mc : r.methods) {
        std::snprintf(cell, sizeof cell, "%9.3f (%.4f)", mc.coverage(), mc.mc_standard_error());
        out << cell;
      }
      std::snprintf(cell, sizeof cell, "%10.2f", r.wall_seconds);
      out << cell << '\n';
      bool any_failure = false;
      for (const auto& mc : r.methods) any_failure = any_failure || mc.failures() > 0;
      if (any_failure) {
        out << "  excluded:";
        for (const auto& mc : r.methods) {
          out << ' ' << label(mc.method) << '=' << mc.failures() << " (infeasible "
              << mc.infeasible << ", Gamma_m^2<=0 " << mc.nonpositive_variance << ", other "
              << mc.other_failures << ')';
        }
        out << '\n';
      }
    }
    out << "(coverage with Monte Carlo standard error; excluded replications are not in the "
           "denominator)\n";
  }
};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::DuplicateEdge:
    case ErrorKind::VertexOutOfRange:
    case ErrorKind::SelfLoop:
    case ErrorKind::NonFiniteInput:
    case ErrorKind::InvalidArgument:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  auto real = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw InputError("bad grid value '" + s + "'");
    }
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw InputError("grid must be min:max:step");
    const double lo = real(parts[0]);
    const double hi = real(parts[1]);
    const double step = real(parts[2]);
    if (!(step > 0.0) || hi < lo) throw InputError("grid needs min <= max and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1000000) throw InputError("grid has too many points");
    for (std::size_t k = 0; k < count; ++k) out.push_back(lo + step * static_cast<double>(k));
  } else {
    for (const auto& s : split_list(spec)) out.push_back(real(s));
    std::sort(out.begin(), out.end());
  }
  if (out.empty()) throw InputError("empty grid");
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel density estimation and jackknife empirical likelihood inference for "
               "dyadic (network edge) data"};
  app.name("dyadkde");
  app.require_subcommand(1);
  // -h is left free for the bandwidth option
  app.set_help_flag("--help", "Print this help message and exit");
  app.option_defaults()->always_capture_default();

  EstimateCmd estimate;
  CiCmd ci;
  ProfileCmd profile;
  SimulateCmd simulate;
  BandwidthCmd bandwidth;
  auto sub = [&](const char* name, const char* about) -> CLI::App& {
    CLI::App* s = app.add_subcommand(name, about);
    s->set_help_flag("--help", "Print this help message and exit");
    return *s;
  };
  estimate.setup(sub("estimate", "Density estimate at one design point"));
  ci.setup(sub("ci", "Confidence interval at one design point"));
  profile.setup(sub("profile", "Estimates and pointwise intervals on a grid"));
  simulate.setup(sub("simulate", "Monte Carlo coverage experiment"));
  bandwidth.setup(sub("bandwidth", "Rule-of-thumb bandwidth"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "estimate") return estimate.exec(out);
    if (name == "ci") return ci.exec(out, err);
    if (name == "profile") return profile.exec(out);
    if (name == "simulate") return simulate.exec(out);
    if (name == "bandwidth") return bandwidth.exec(out);
    err << "internal error: unhandled subcommand " << name << '\n';
    return kExitInternal;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("dyadkde");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dyadkde::cli
