// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/cli.hpp"

#include "qpureb/errors.hpp"
#include "qpureb/model_states.hpp"
#include "qpureb/plot.hpp"
#include "qpureb/pureb.hpp"
#include "qpureb/serialize.hpp"
#include "qpureb/varcircuit.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace qpureb::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("invalid number '" + s + "' in " + what);
  }
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("invalid integer '" + s + "' in " + what);
  }
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(trim(part), "list '" + text + "'"));
  if (out.empty()) throw ArgumentError("empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) out.push_back(to_int(trim(part), "list '" + text + "'"));
  if (out.empty()) throw ArgumentError("empty list");
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ArgumentError("range must look like lo:hi:count");
  const double lo = to_double(parts[0], "range"), hi = to_double(parts[1], "range");
  const int count = to_int(parts[2], "range");
  if (count < 1) throw ArgumentError("range count must be at least 1");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return out;
}

Dims parse_dims(const std::string& text) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) throw ArgumentError("dimensions must look like 3x3");
  const Dims d{to_int(parts[0], "dims"), to_int(parts[1], "dims")};
  if (d.a < 2 || d.b < 2) throw ArgumentError("local dimensions must be at least 2");
  return d;
}

DensityMatrix parse_state_spec(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return load_density_matrix(spec.substr(5));
  const auto parts = split(spec, ':');
  const std::string& name = parts.front();
  if (name == "tiles" || name == "pyramid") {
    if (parts.size() != 1) throw ArgumentError("'" + name + "' takes no parameters");
    return upb_bes(upb_name_from_string(name));
  }
  if (name == "werner" || name == "isotropic") {
    if (parts.size() != 3) throw ArgumentError(name + " spec must look like " + name + ":d:alpha");
    const int d = to_int(parts[1], spec);
    const double alpha = to_double(parts[2], spec);
    return name == "werner" ? werner(d, alpha) : isotropic(d, alpha);
  }
  if (name == "example1") {
    if (parts.size() != 2) throw ArgumentError("example1 spec must look like example1:lambda");
    return appendix_b_example1(to_double(parts[1], spec));
  }
  if (name == "example2") {
    if (parts.size() != 2 && parts.size() != 3) throw ArgumentError("example2 spec must look like example2:lambda[:d]");
    return appendix_b_example2(to_double(parts[1], spec), parts.size() == 3 ? to_int(parts[2], spec) : 2);
  }
  throw ArgumentError("unknown state spec '" + spec + "'");
}

Family parse_family(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts.front();
  Family f;
  f.name = spec;
  if (name == "werner" || name == "isotropic") {
    if (parts.size() != 2) throw ArgumentError(name + " family must look like " + name + ":d");
    const int d = to_int(parts[1], spec);
    if (name == "werner") {
      f.state = [d](double a) { return werner(d, a); };
      f.analytic = [d](double a) { return werner_ree_analytic(d, a); };
      f.beta_to_alpha = [d](double b) { return werner_beta_to_alpha(d, b); };
    } else {
      f.state = [d](double a) { return isotropic(d, a); };
      f.analytic = [d](double a) { return isotropic_ree_analytic(d, a); };
      f.beta_to_alpha = [d](double b) { return isotropic_beta_to_alpha(d, b); };
    }
    f.state(0.0);
    return f;
  }
  if (name == "example1") {
    if (parts.size() != 1) throw ArgumentError("example1 family takes no parameters");
    f.state = [](double lam) { return appendix_b_example1(lam); };
    f.analytic = [](double) { return 0.0; };
    return f;
  }
  if (name == "example2") {
    const int d = parts.size() == 2 ? to_int(parts[1], spec) : 2;
    if (parts.size() > 2) throw ArgumentError("example2 family must look like example2[:d]");
    f.state = [d](double lam) { return appendix_b_example2(lam, d); };
    f.analytic = [](double) { return 0.0; };
    f.state(0.5);
    return f;
  }
  throw ArgumentError("unknown family '" + spec + "'");
}

Direction parse_direction(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts.front();
  if ((name == "werner" || name == "isotropic") && parts.size() == 2) {
    const Family f = parse_family(spec);
    return {Ray::from_state(f.state(1.0)), f.beta_to_alpha};
  }
  if (name == "random") {
    if (parts.size() != 4) throw ArgumentError("random direction must look like random:da:db:seed");
    const Dims dims{to_int(parts[1], spec), to_int(parts[2], spec)};
    if (dims.a < 2 || dims.b < 2) throw ArgumentError("local dimensions must be at least 2");
    return {Ray::random(dims, static_cast<std::uint64_t>(std::stoull(parts[3]))), nullptr};
  }
  return {Ray::from_state(parse_state_spec(spec)), nullptr};
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

// Settings shared by every subcommand.
struct Common {
  std::string out_dir = ".";
  std::uint64_t seed = 20220917;
  int threads = 1;
  std::string config;
};

struct OptimizerFlags {
  int restarts = 3;
  std::string backend = "eigen";
  double tolerance = 1e-10;
  int max_iters = 2000;

  OptimizerConfig build(std::uint64_t seed) const {
    OptimizerConfig c;
    c.restarts = restarts;
    c.backend = log_backend_from_string(backend);
    c.tolerance = tolerance;
    c.max_iters = max_iters;
    c.seed = seed;
    c.validate();
    return c;
  }
};

void add_optimizer_flags(CLI::App* app, OptimizerFlags& f) {
  app->add_option("--restarts", f.restarts, "Random restarts per minimization")->capture_default_str();
  app->add_option("--backend", f.backend, "Matrix log backend (eigen|pade)")->capture_default_str();
  app->add_option("--tolerance", f.tolerance, "Relative objective tolerance")->capture_default_str();
  app->add_option("--max-iters", f.max_iters, "L-BFGS iteration cap")->capture_default_str();
}

class Run {
 public:
  Run(std::string command, const Common& common, const CLI::App* sub)
      : command_(std::move(command)), common_(common), sub_(sub), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    std::filesystem::create_directories(common.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + common.out_dir + "': " + ec.message());
  }

  std::string path(const std::string& name) const { return (std::filesystem::path(common_.out_dir) / name).string(); }

  void write(const std::string& name, const std::string& content) {
    write_text_file(path(name), content);
    outputs_.push_back(name);
  }

  void finish(const std::string& status, nlohmann::json summary = nlohmann::json::object()) {
    nlohmann::json cfg = nlohmann::json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      if (opt->get_name() == "--help") continue;
      const std::string key = opt->get_name();
      if (!opt->results().empty()) cfg[key] = opt->as<std::string>();
      else if (!opt->get_default_str().empty()) cfg[key] = opt->get_default_str();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::json m = {{"command", command_},
                        {"version", QPUREB_VERSION},
                        {"seed", common_.seed},
                        {"threads", common_.threads},
                        {"config_file", common_.config},
                        {"config", cfg},
                        {"wall_time_seconds", wall},
                        {"status", status},
                        {"outputs", outputs_},
                        {"summary", std::move(summary)}};
    write_text_file(path("manifest.json"), m.dump(2) + "\n");
  }

 private:
  std::string command_;
  Common common_;
  const CLI::App* sub_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
};

std::string fmt(double v) { return format_double(v); }

int cmd_ree(const Common& common, const CLI::App* sub, const std::string& spec, int k, const OptimizerFlags& of) {
  if (k < 1) throw ArgumentError("--k must be at least 1");
  const DensityMatrix rho = parse_state_spec(spec);
  const OptimizerConfig cfg = of.build(common.seed);
  Run run("ree", common, sub);
  const OptimizerResult res = minimize_ree(rho, k, cfg);
  nlohmann::json ck = checkpoint_json(res, cfg);
  ck["state"] = spec;
  run.write("ree.json", ck.dump(2) + "\n");
  std::cout << "ree " << fmt(res.ree) << "\n";
  std::cout << "converged " << (res.converged ? "true" : "false") << "\n";
  run.finish(res.converged ? "ok" : "not_converged", {{"ree", res.ree}, {"iterations", res.iterations}});
  return res.converged ? kOk : kNonConvergence;
}

int cmd_curve(const Common& common, const CLI::App* sub, const std::string& spec, const std::string& alphas_text,
              const std::string& range_text, const std::string& k_text, bool warm, const OptimizerFlags& of) {
  const Family fam = parse_family(spec);
  if (alphas_text.empty() == range_text.empty()) throw ArgumentError("give exactly one of --alphas and --alpha-range");
  const std::vector<double> alphas = alphas_text.empty() ? parse_range(range_text) : parse_double_list(alphas_text);
  const std::vector<int> ks = parse_int_list(k_text);
  for (int k : ks)
    if (k < 1) throw ArgumentError("k values must be at least 1");
  for (double a : alphas) fam.state(a);
  const OptimizerConfig cfg = of.build(common.seed);
  Run run("curve", common, sub);

  CsvWriter csv({"alpha", "k", "ree"});
  std::vector<Series> series;
  bool all_converged = true;
  for (int k : ks) {
    const auto points = ree_curve(fam.state, alphas, k, cfg, warm, common.threads);
    Series s{"PureB(" + std::to_string(k) + ")", {}, {}};
    for (const auto& p : points) {
      csv.row({fmt(p.alpha), std::to_string(k), fmt(p.ree)});
      s.x.push_back(p.alpha);
      s.y.push_back(p.ree);
      all_converged = all_converged && p.converged;
    }
    series.push_back(std::move(s));
  }
  if (fam.analytic) {
    Series s{"analytic", alphas, {}};
    for (double a : alphas) s.y.push_back(fam.analytic(a));
    series.push_back(std::move(s));
  }
  run.write("curve.csv", csv.str());
  run.write("curve.svg", line_plot_svg(series, {spec, "alpha", "REE", true}));
  std::cout << csv.str();
  run.finish(all_converged ? "ok" : "not_converged");
  return all_converged ? kOk : kNonConvergence;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  for (const auto& m : split(text, ',')) out.push_back(method_from_string(trim(m)));
  return out;
}

struct BoundaryFlags {
  std::string methods = "dm,ppt,cha,pureb";
  std::string k_list = "8";
  double epsilon = 1e-7;
  double width = 1e-5;
  int cha_states = 200;
  int cha_rounds = 50;
};

void add_boundary_flags(CLI::App* app, BoundaryFlags& f) {
  app->add_option("--methods", f.methods, "Comma list of dm,ppt,cha,pureb")->capture_default_str();
  app->add_option("--k-list", f.k_list, "Comma list of extension counts")->capture_default_str();
  app->add_option("--epsilon", f.epsilon, "REE threshold of the PureB boundary")->capture_default_str();
  app->add_option("--width", f.width, "Final bracket width of the binary search")->capture_default_str();
  app->add_option("--cha-states", f.cha_states, "Product states per BCHA round")->capture_default_str();
  app->add_option("--cha-rounds", f.cha_rounds, "BCHA bagging rounds")->capture_default_str();
}

BoundaryConfig build_boundary(const BoundaryFlags& f, const OptimizerFlags& of, std::uint64_t seed) {
  BoundaryConfig c;
  c.methods = parse_methods(f.methods);
  c.k_list = parse_int_list(f.k_list);
  for (int k : c.k_list)
    if (k < 1) throw ArgumentError("k values must be at least 1");
  c.cha.n_states = f.cha_states;
  c.cha.bagging_rounds = f.cha_rounds;
  c.cha.seed = seed;
  c.pureb.epsilon = f.epsilon;
  c.pureb.width = f.width;
  c.pureb.optimizer = of.build(seed);
  return c;
}

int cmd_boundary(const Common& common, const CLI::App* sub, const std::string& spec, const BoundaryFlags& bf,
                 const OptimizerFlags& of) {
  const Direction dir = parse_direction(spec);
  const BoundaryConfig cfg = build_boundary(bf, of, common.seed);
  Run run("boundary", common, sub);
  const BoundaryResult r = boundary(dir.ray, cfg);

  CsvWriter csv({"method", "k", "beta", "alpha", "flagged"});
  const auto alpha = [&](double b) { return dir.beta_to_alpha ? fmt(dir.beta_to_alpha(std::min(b, r.beta_dm))) : ""; };
  if (cfg.has(Method::dm)) csv.row({"dm", "", fmt(r.beta_dm), alpha(r.beta_dm), "0"});
  if (cfg.has(Method::ppt)) csv.row({"ppt", "", fmt(r.beta_ppt), alpha(r.beta_ppt), "0"});
  if (r.beta_cha) csv.row({"cha", "", fmt(*r.beta_cha), alpha(*r.beta_cha), "0"});
  nlohmann::json notes = nlohmann::json::object();
  for (const auto& [k, s] : r.beta_pureb) {
    csv.row({"pureb", std::to_string(k), fmt(s.beta), alpha(s.beta), s.flagged ? "1" : "0"});
    notes[std::to_string(k)] = {{"inside", s.inside},     {"outside", s.outside},   {"ree_inside", s.ree_inside},
                                {"ree_outside", s.ree_outside}, {"evaluations", s.evaluations},
                                {"iterations", s.iterations}, {"note", s.note}};
  }
  run.write("boundary.csv", csv.str());
  std::cout << csv.str();
  run.finish("ok", {{"pureb", notes}});
  return kOk;
}

int cmd_plane(const Common& common, const CLI::App* sub, const std::string& v1, const std::string& v2, int resolution,
              const BoundaryFlags& bf, const OptimizerFlags& of) {
  const DensityMatrix a = parse_state_spec(v1), b = parse_state_spec(v2);
  const BoundaryConfig cfg = build_boundary(bf, of, common.seed);
  plane_rays(a, b, resolution);
  Run run("plane", common, sub);
  const auto results = plane_scan(a, b, resolution, cfg, common.threads);

  std::vector<std::string> header{"theta"};
  for (Method m : {Method::dm, Method::ppt, Method::cha})
    if (cfg.has(m)) header.push_back("beta_" + to_string(m));
  if (cfg.has(Method::pureb))
    for (int k : cfg.k_list) header.push_back("beta_pureb_" + std::to_string(k));
  CsvWriter csv(header);
  std::vector<Series> series;
  for (std::size_t c = 1; c < header.size(); ++c) series.push_back({header[c].substr(5), {}, {}});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / resolution;
    const auto& r = results[i];
    std::vector<double> vals;
    if (cfg.has(Method::dm)) vals.push_back(r.beta_dm);
    if (cfg.has(Method::ppt)) vals.push_back(r.beta_ppt);
    if (cfg.has(Method::cha)) vals.push_back(r.beta_cha.value_or(0.0));
    if (cfg.has(Method::pureb))
      for (int k : cfg.k_list) vals.push_back(r.beta_pureb.at(k).beta);
    std::vector<std::string> cells{fmt(theta)};
    for (std::size_t c = 0; c < vals.size(); ++c) {
      cells.push_back(fmt(vals[c]));
      series[c].x.push_back(theta);
      series[c].y.push_back(vals[c]);
    }
    csv.row(cells);
  }
  run.write("plane.csv", csv.str());
  run.write("plane.svg", polar_plot_svg(series, {v1 + " / " + v2, "", "", false, 640, 640}));
  run.finish("ok");
  return kOk;
}

int cmd_survey(const Common& common, const CLI::App* sub, int samples, const std::string& dims_text, int cha_states,
               int cha_rounds) {
  const Dims dims = parse_dims(dims_text);
  ChaConfig cha;
  cha.n_states = cha_states;
  cha.bagging_rounds = cha_rounds;
  cha.seed = common.seed;
  if (samples < 1) throw ArgumentError("--samples must be at least 1");
  Run run("survey", common, sub);
  const GapSurvey s = gap_survey(samples, dims, common.seed, cha, common.threads);
  CsvWriter csv({"sample", "beta_ppt", "beta_cha", "gap"});
  int negative = 0;
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const auto& g = s.samples[i];
    csv.row({std::to_string(i), fmt(g.beta_ppt), fmt(g.beta_cha), fmt(g.gap)});
    if (g.gap < -1e-6) ++negative;
  }
  run.write("survey.csv", csv.str());
  std::cout << "samples " << samples << "\nmedian_gap " << fmt(s.median) << "\nmax_gap " << fmt(s.max)
            << "\nmin_gap " << fmt(s.min) << "\nnegative_gaps " << negative << "\n";
  run.finish("ok", {{"median_gap", s.median}, {"max_gap", s.max}, {"min_gap", s.min}, {"negative_gaps", negative}});
  return kOk;
}

int cmd_kext_error(const Common& common, const CLI::App* sub, int samples, const std::string& k_text,
                   const std::string& reference, const std::string& dims_text, const OptimizerFlags& of) {
  KextErrorConfig cfg;
  cfg.n_samples = samples;
  cfg.k_list = parse_int_list(k_text);
  cfg.dims = parse_dims(dims_text);
  cfg.seed = common.seed;
  cfg.pureb.optimizer = of.build(common.seed);
  std::optional<BetaReference> ref;
  if (!reference.empty()) ref = read_beta_reference(reference);
  Run run("kext-error", common, sub);
  const auto rows = random_direction_kext_error(cfg, ref ? &*ref : nullptr, common.threads);
  CsvWriter csv({"direction_id", "k", "beta", "reference", "relative_error"});
  for (const auto& r : rows) csv.row({r.direction_id, std::to_string(r.k), fmt(r.beta), fmt(r.reference), fmt(r.relative_error)});
  run.write("kext_error.csv", csv.str());
  std::cout << csv.str();
  run.finish("ok", {{"mode", ref ? "reference" : "self-consistency"}});
  return kOk;
}

int cmd_circuit(const Common& common, const CLI::App* sub, int k, int layers, const std::string& family,
                const std::string& alphas_text, bool find_boundary, const OptimizerFlags& of, double epsilon) {
  if (k < 1) throw ArgumentError("--k must be at least 1");
  if (layers == 0 || layers < -1) throw ArgumentError("--layers must be at least 1");
  CircuitConfig cfg;
  cfg.layers = layers < 0 ? k + 1 : layers;
  cfg.optimizer = of.build(common.seed);
  const Family fam = parse_family(family);
  if (fam.state(0.5).dims() != Dims{2, 2}) throw ArgumentError("the circuit model supports 2x2 families only");
  Run run("circuit", common, sub);

  nlohmann::json summary = {{"k", k}, {"layers", cfg.layers}};
  if (!alphas_text.empty()) {
    const auto alphas = parse_double_list(alphas_text);
    CsvWriter csv({"alpha", "k", "layers", "ree"});
    Series s{"circuit k=" + std::to_string(k), {}, {}};
    for (double a : alphas) {
      const CircuitResult r = circuit_ree(fam.state(a), k, cfg);
      csv.row({fmt(a), std::to_string(k), std::to_string(cfg.layers), fmt(r.ree)});
      s.x.push_back(a);
      s.y.push_back(r.ree);
    }
    run.write("circuit.csv", csv.str());
    run.write("circuit.svg", line_plot_svg({s}, {family, "alpha", "REE", true}));
    std::cout << csv.str();
  }
  if (find_boundary) {
    if (!fam.beta_to_alpha) throw ArgumentError("boundary search needs a werner or isotropic family");
    const Ray ray = Ray::from_state(fam.state(1.0));
    const PurebSearch s = circuit_beta_search(ray, k, cfg, epsilon);
    const double alpha = fam.beta_to_alpha(std::min(s.beta, beta_dm(ray)));
    CsvWriter csv({"k", "layers", "beta", "alpha"});
    csv.row({std::to_string(k), std::to_string(cfg.layers), fmt(s.beta), fmt(alpha)});
    run.write("circuit_boundary.csv", csv.str());
    std::cout << csv.str();
    summary["boundary_alpha"] = alpha;
    summary["flagged"] = s.flagged;
  }
  run.finish("ok", summary);
  return kOk;
}

// Moves --config's key=value pairs to the end of argv as --key=value so they
// take precedence over flags given on the command line.
std::vector<std::string> expand_config(int argc, char** argv, std::string& config_path) {
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config_file(config_path)) {
      if (key == "config") continue;
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

int default_threads() {
  if (const char* env = std::getenv("QPUREB_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid QPUREB_THREADS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int run(int argc, char** argv) {
  Common common;
  common.threads = default_threads();
  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv, common.config);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Relative entropy of entanglement and separability boundaries from pure bosonic extensions"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", QPUREB_VERSION);
  app.require_subcommand(1);
  const auto add_common = [&](CLI::App* s) {
    s->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    s->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    s->add_option("--threads", common.threads, "Worker threads (default $QPUREB_THREADS or 1)")->check(CLI::PositiveNumber);
    s->add_option("--config", common.config, "key=value file; entries override flags");
  };

  OptimizerFlags of;
  BoundaryFlags bf;

  std::string ree_spec;
  int ree_k = 8;
  auto* ree = app.add_subcommand("ree", "Minimize the PureB(k) relative entropy of one state");
  ree->add_option("state", ree_spec, "State spec")->required();
  ree->add_option("--k", ree_k, "Extension count")->capture_default_str();
  add_optimizer_flags(ree, of);
  add_common(ree);

  std::string curve_family, curve_alphas, curve_range, curve_k = "8";
  bool curve_warm = false;
  auto* curve = app.add_subcommand("curve", "REE along a one-parameter family");
  curve->add_option("family", curve_family, "werner:d, isotropic:d, example1, example2[:d]")->required();
  curve->add_option("--alphas", curve_alphas, "Comma list of parameters");
  curve->add_option("--alpha-range", curve_range, "lo:hi:count");
  curve->add_option("--k-list", curve_k, "Comma list of extension counts")->capture_default_str();
  curve->add_flag("--warm-start", curve_warm, "Start each point from the previous optimum");
  add_optimizer_flags(curve, of);
  add_common(curve);

  std::string boundary_spec;
  auto* bnd = app.add_subcommand("boundary", "Boundary parameters along one ray");
  bnd->add_option("direction", boundary_spec, "werner:d, isotropic:d, random:da:db:seed or a state spec")->required();
  add_boundary_flags(bnd, bf);
  add_optimizer_flags(bnd, of);
  add_common(bnd);

  std::string plane_v1, plane_v2;
  int plane_res = 64;
  auto* plane = app.add_subcommand("plane", "Boundaries over the plane spanned by two states");
  plane->add_option("v1", plane_v1, "State spec")->required();
  plane->add_option("v2", plane_v2, "State spec")->required();
  plane->add_option("--resolution", plane_res, "Number of directions")->capture_default_str();
  add_boundary_flags(plane, bf);
  add_optimizer_flags(plane, of);
  add_common(plane);

  int survey_samples = 100;
  std::string survey_dims = "3x3";
  auto* survey = app.add_subcommand("survey", "PPT versus BCHA gaps on random rays");
  survey->add_option("--samples", survey_samples, "Number of random states")->capture_default_str();
  survey->add_option("--dims", survey_dims, "Local dimensions, e.g. 3x3")->capture_default_str();
  survey->add_option("--cha-states", bf.cha_states, "Product states per BCHA round")->capture_default_str();
  survey->add_option("--cha-rounds", bf.cha_rounds, "BCHA bagging rounds")->capture_default_str();
  add_common(survey);

  int kext_samples = 10;
  std::string kext_k = "4,8", kext_ref, kext_dims = "2x2";
  auto* kext = app.add_subcommand("kext-error", "Relative error of PureB(k) boundaries");
  kext->add_option("--samples", kext_samples, "Random rays in self-consistency mode")->capture_default_str();
  kext->add_option("--k-list", kext_k, "Comma list of extension counts")->capture_default_str();
  kext->add_option("--reference", kext_ref, "CSV with direction_id,k,beta");
  kext->add_option("--dims", kext_dims, "Local dimensions of random rays")->capture_default_str();
  add_optimizer_flags(kext, of);
  add_common(kext);

  int circ_k = 4, circ_layers = -1;
  std::string circ_family = "werner:2", circ_alphas;
  bool circ_boundary = true;
  double circ_eps = 1e-7;
  auto* circ = app.add_subcommand("circuit", "Symmetric variational circuit model (qubits)");
  circ->add_option("--k", circ_k, "Extension count")->capture_default_str();
  circ->add_option("--layers", circ_layers, "Layers (default k+1)");
  circ->add_option("--family", circ_family, "2x2 family, e.g. werner:2")->capture_default_str();
  circ->add_option("--alphas", circ_alphas, "Comma list of parameters for an REE curve");
  circ->add_option("--boundary", circ_boundary, "Search the boundary along the family ray")->capture_default_str();
  circ->add_option("--epsilon", circ_eps, "REE threshold of the boundary")->capture_default_str();
  add_optimizer_flags(circ, of);
  add_common(circ);

  std::vector<const char*> cargv;
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  omp_set_num_threads(common.threads);
  try {
    if (*ree) return cmd_ree(common, ree, ree_spec, ree_k, of);
    if (*curve) return cmd_curve(common, curve, curve_family, curve_alphas, curve_range, curve_k, curve_warm, of);
    if (*bnd) return cmd_boundary(common, bnd, boundary_spec, bf, of);
    if (*plane) return cmd_plane(common, plane, plane_v1, plane_v2, plane_res, bf, of);
    if (*survey) return cmd_survey(common, survey, survey_samples, survey_dims, bf.cha_states, bf.cha_rounds);
    if (*kext) return cmd_kext_error(common, kext, kext_samples, kext_k, kext_ref, kext_dims, of);
    if (*circ) return cmd_circuit(common, circ, circ_k, circ_layers, circ_family, circ_alphas, circ_boundary, of, circ_eps);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::logic_error& e) {
    // Invalid input objects, e.g. a state file that is not a density matrix.
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  }
  return kUsage;
}

}  // namespace qpureb::cli
