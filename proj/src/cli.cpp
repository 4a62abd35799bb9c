#include "tdm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "tdm/errors.hpp"
#include "tdm/families.hpp"
#include "tdm/io.hpp"
#include "tdm/kspace.hpp"
#include "tdm/mds_classical.hpp"
#include "tdm/mds_iterative.hpp"
#include "tdm/metric.hpp"
#include "tdm/svg.hpp"

namespace tdm::cli {

namespace {

namespace fs = std::filesystem;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

const char* code_tag(int code) {
  switch (code) {
  case kIoError: return "E_IO";
  case kValidation: return "E_VALIDATION";
  case kDisconnected: return "E_DISCONNECTED";
  case kOptimizerFailure: return "E_OPTIMIZER";
  case kBadConfig: return "E_CONFIG";
  default: return "E_UNKNOWN";
  }
}

void setup_logging() {
  auto logger = spdlog::get("tdm");
  if (!logger) {
    logger = spdlog::stderr_logger_st("tdm");
    logger->set_pattern("%l: %v");
  }
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::err;
  if (const char* env = std::getenv("TDM_EMBED_LOG")) {
    const std::string v = env;
    if (v == "info") level = spdlog::level::info;
    else if (v == "debug") level = spdlog::level::debug;
  }
  spdlog::set_level(level);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kIoError, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(kIoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(kIoError, "failed writing '" + path.string() + "'");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) out << content;
  else write_file(path, content);
}

// --- configuration -------------------------------------------------------

struct RunConfig {
  std::string optimizer = "sgd";
  int alpha = 2;
  int dims = 2;
  std::uint64_t seed = 0;
  int seeds = 10;
  int iters = 0; // 0: per-optimizer default
  double tol = 1e-7;
  std::string sym = "mean";
  std::string ingest = "endpoint";
  std::string init = "classical";
  double lr_x = 0.05;
  double lr_kappa = 0.01;
  int warmup = 200;
  std::string svg;
  std::string out;
  int jobs = 0;
  std::string config;
};

const std::vector<std::string> kOptimizers = {"classical", "majorization", "sgd", "kappa-joint"};

int default_iters(const std::string& optimizer, bool bench) {
  if (optimizer == "kappa-joint") return 2000;
  if (optimizer == "majorization") return bench ? 15 : 300;
  return 15;
}

int effective_iters(const RunConfig& c, const std::string& optimizer, bool bench) {
  return c.iters > 0 ? c.iters : default_iters(optimizer, bench);
}

// Options shared by embed and bench; the JSON config file keys equal the long
// flag names without dashes.
struct ConfigBinding {
  std::string key;
  std::function<void(const nlohmann::json&)> assign;
};

template <typename T>
ConfigBinding bind_key(const std::string& key, T& field) {
  return {key, [&field, key](const nlohmann::json& v) {
            try {
              field = v.get<T>();
            } catch (const nlohmann::json::exception&) {
              fail(kBadConfig, "config key '" + key + "' has the wrong type");
            }
          }};
}

std::vector<ConfigBinding> add_run_options(CLI::App* app, RunConfig& c) {
  app->add_option("--optimizer", c.optimizer, "classical | majorization | sgd | kappa-joint");
  app->add_option("--alpha", c.alpha, "weight exponent, 0 | 1 | 2");
  app->add_option("--dims", c.dims, "embedding dimension");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--iters", c.iters, "iterations / steps (optimizer default if unset)");
  app->add_option("--tol", c.tol, "majorization relative tolerance");
  app->add_option("--sym", c.sym, "symmetrization: mean | min | max");
  app->add_option("--ingest", c.ingest, "vertex model: endpoint | block");
  app->add_option("--init", c.init, "majorization start: classical | random");
  app->add_option("--lr-x", c.lr_x, "kappa-joint coordinate step");
  app->add_option("--lr-kappa", c.lr_kappa, "kappa-joint curvature step");
  app->add_option("--warmup", c.warmup, "kappa-joint steps before kappa moves");
  app->add_option("--svg", c.svg, "write an SVG rendering");
  app->add_option("--out", c.out, "output path (stdout if unset)");
  app->add_option("--jobs", c.jobs, "worker threads (0: logical cores)");
  app->add_option("--config", c.config, "JSON config file; flags override it");
  return {bind_key("optimizer", c.optimizer), bind_key("alpha", c.alpha),   bind_key("dims", c.dims),
          bind_key("seed", c.seed),           bind_key("seeds", c.seeds),   bind_key("iters", c.iters),
          bind_key("tol", c.tol),             bind_key("sym", c.sym),       bind_key("ingest", c.ingest),
          bind_key("init", c.init),           bind_key("lr-x", c.lr_x),     bind_key("lr-kappa", c.lr_kappa),
          bind_key("warmup", c.warmup),
          bind_key("svg", c.svg),             bind_key("out", c.out),       bind_key("jobs", c.jobs)};
}

void merge_config_file(CLI::App* app, const RunConfig& c, const std::vector<ConfigBinding>& bindings) {
  if (c.config.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(c.config));
  } catch (const nlohmann::json::parse_error& e) {
    fail(kBadConfig, "config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) fail(kBadConfig, "config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto b = std::find_if(bindings.begin(), bindings.end(), [&](const auto& x) { return x.key == it.key(); });
    if (b == bindings.end()) fail(kBadConfig, "unknown config key '" + it.key() + "'");
    const CLI::Option* opt = app->get_option_no_throw("--" + it.key());
    if (opt == nullptr || opt->count() == 0) b->assign(*it);
  }
}

void validate(const RunConfig& c, bool bench) {
  auto member = [](const std::string& v, std::initializer_list<const char*> set) {
    return std::any_of(set.begin(), set.end(), [&](const char* s) { return v == s; });
  };
  if (c.alpha < 0 || c.alpha > 2) fail(kBadConfig, "--alpha must be 0, 1 or 2");
  if (c.dims < 1) fail(kBadConfig, "--dims must be at least 1");
  if (c.iters < 0) fail(kBadConfig, "--iters must be at least 1");
  if (!(c.tol > 0.0)) fail(kBadConfig, "--tol must be positive");
  if (!member(c.sym, {"mean", "min", "max"})) fail(kBadConfig, "--sym must be mean, min or max");
  if (!member(c.ingest, {"endpoint", "block"})) fail(kBadConfig, "--ingest must be endpoint or block");
  if (!member(c.init, {"classical", "random"})) fail(kBadConfig, "--init must be classical or random");
  if (!(c.lr_x > 0.0)) fail(kBadConfig, "--lr-x must be positive");
  if (!(c.lr_kappa >= 0.0)) fail(kBadConfig, "--lr-kappa must be nonnegative");
  if (c.warmup < 0) fail(kBadConfig, "--warmup must be nonnegative");
  if (c.jobs < 0) fail(kBadConfig, "--jobs must be nonnegative");
  if (!bench && std::find(kOptimizers.begin(), kOptimizers.end(), c.optimizer) == kOptimizers.end())
    fail(kBadConfig, "unknown optimizer '" + c.optimizer + "'");
}

Symmetrization sym_policy(const std::string& s) {
  if (s == "min") return Symmetrization::Min;
  if (s == "max") return Symmetrization::Max;
  return Symmetrization::Mean;
}

IngestMode ingest_mode(const std::string& s) { return s == "block" ? IngestMode::Block : IngestMode::Endpoint; }

// --- pipeline ------------------------------------------------------------

RoadGraph load_graph(const std::string& path, IngestMode mode) {
  const auto content = read_file(path);
  try {
    return build_graph(parse_network(content), mode);
  } catch (const DegreeViolation& e) {
    fail(kValidation, std::string(e.what()) + " [vertex " + e.vertex() + "]");
  } catch (const MalformedFile& e) {
    fail(kValidation, e.what());
  } catch (const InvalidSegment& e) {
    fail(kValidation, e.what());
  }
}

struct Problem {
  std::vector<std::string> ids;
  Eigen::MatrixXd d;
  Eigen::MatrixXd w;
  std::optional<RoadGraph> graph;
};

std::string describe_components(const std::vector<std::string>& ids, const Eigen::MatrixXd& directed) {
  std::string s;
  for (const auto& group : reachability_components(directed)) {
    s += s.empty() ? "{" : " {";
    for (std::size_t k = 0; k < group.size(); ++k) s += (k ? "," : "") + ids[group[k]];
    s += "}";
  }
  return s;
}

Problem finish_problem(std::vector<std::string> ids, const Eigen::MatrixXd& directed, const RunConfig& c) {
  Problem p;
  p.ids = std::move(ids);
  try {
    p.d = symmetrize(directed, sym_policy(c.sym));
  } catch (const DisconnectedPair& e) {
    fail(kDisconnected, "no path in either direction between '" + p.ids[e.i()] + "' and '" + p.ids[e.j()] +
                            "'; components: " + describe_components(p.ids, directed));
  } catch (const std::invalid_argument& e) {
    fail(kValidation, e.what());
  }
  try {
    p.w = weights(p.d, c.alpha);
  } catch (const ZeroDistance& e) {
    fail(kValidation, "zero travel time between '" + p.ids[e.i()] + "' and '" + p.ids[e.j()] + "'");
  }
  return p;
}

Problem load_problem(const std::string& input, const RunConfig& c) {
  if (fs::path(input).extension() == ".csv") {
    std::istringstream in(read_file(input));
    LabeledMatrix m;
    try {
      m = read_matrix_csv(in);
    } catch (const MalformedFile& e) {
      fail(kValidation, e.what());
    }
    return finish_problem(std::move(m.ids), m.values, c);
  }
  RoadGraph g = load_graph(input, ingest_mode(c.ingest));
  Problem p = finish_problem(g.vertices(), all_pairs_times(g), c);
  p.graph = std::move(g);
  return p;
}

struct Outcome {
  Layout coords;
  std::optional<double> kappa;
  RunRecord record;
};

Outcome optimize(const Problem& p, const std::string& optimizer, const RunConfig& c, std::uint64_t seed,
                 bool bench) {
  const auto dims = static_cast<Eigen::Index>(c.dims);
  const int iters = effective_iters(c, optimizer, bench);
  if (optimizer == "classical") {
    if (dims > p.d.rows()) fail(kBadConfig, "--dims exceeds the number of vertices");
    auto full = classical_mds_full(p.d, dims);
    if (full.negative_mass > 0.0) spdlog::info("classical: clamped negative eigenvalue mass {}", full.negative_mass);
    Outcome o{std::move(full.coords), std::nullopt, {}};
    o.record.seed = seed;
    o.record.trajectory.push_back(stress(o.coords, p.d, p.w));
    o.record.final = o.record.trajectory.back();
    return o;
  }
  if (optimizer == "majorization") {
    MajorizationOptions opts{iters, c.tol, seed};
    // Benchmarks compare optimizers from the same random starts.
    const bool classical_start = !bench && c.init == "classical";
    if (classical_start && dims > p.d.rows()) fail(kBadConfig, "--dims exceeds the number of vertices");
    auto r = run_majorization(p.d, p.w, dims, classical_start ? MajorizationInit::Classical : MajorizationInit::Random,
                              opts);
    return {std::move(r.layout), std::nullopt, std::move(r.record)};
  }
  if (optimizer == "sgd") {
    auto r = run_sgd(p.d, p.w, dims, SgdSchedule::for_weights(p.w, iters), seed);
    return {std::move(r.layout), std::nullopt, std::move(r.record)};
  }
  if (optimizer == "kappa-joint") {
    JointOptions opts;
    opts.steps = iters;
    opts.lr_x = c.lr_x;
    opts.lr_kappa = c.lr_kappa;
    opts.warmup_steps = c.warmup;
    opts.seed = seed;
    auto r = optimize_joint(p.d, p.w, dims, opts);
    return {std::move(r.layout.coords), r.layout.kappa.value(), std::move(r.record)};
  }
  fail(kBadConfig, "unknown optimizer '" + optimizer + "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// --- commands ------------------------------------------------------------

int cmd_graph(const std::string& input, const std::string& ingest, const std::string& out_path,
              const std::string& csv_path, std::ostream& out) {
  if (ingest != "endpoint" && ingest != "block") fail(kBadConfig, "--ingest must be endpoint or block");
  RoadGraph g = load_graph(input, ingest_mode(ingest));
  ordered_json j = graph_to_json(g);
  j["validation"] = {{"ok", true}, {"vertices", g.size()}, {"arcs", g.arcs().size()}};
  emit(out_path, dump(j), out);
  if (!csv_path.empty()) {
    std::ostringstream csv;
    write_matrix_csv(csv, g.vertices(), all_pairs_times(g));
    write_file(csv_path, csv.str());
  }
  spdlog::info("graph: {} vertices, {} arcs", g.size(), g.arcs().size());
  return kOk;
}

int cmd_embed(const std::string& input, const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(input, c);
  Outcome o;
  try {
    o = optimize(p, c.optimizer, c, c.seed, false);
  } catch (const tdm::Error& e) {
    fail(kOptimizerFailure, e.what());
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
  spdlog::info("embed: {} after {} iterations, normalized stress {}", c.optimizer, o.record.iterations_used,
               o.record.final.normalized);

  const ordered_json layout = o.kappa ? klayout_to_json(p.ids, KLayout{o.coords, Curvature(*o.kappa)})
                                      : layout_to_json(p.ids, o.coords);
  emit(c.out, dump(layout), out);
  if (!c.out.empty()) {
    std::ostringstream traj;
    write_trajectory_jsonl(traj, o.record);
    write_file(fs::path(c.out).replace_extension(".trajectory.jsonl"), traj.str());
  }
  if (!c.svg.empty()) {
    const LabeledLayout view{p.ids, o.coords, o.kappa};
    write_file(c.svg, p.graph ? render_svg(view, *p.graph) : render_svg(view));
  }
  return kOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_bench(const std::string& family, const std::string& optimizer_list, const RunConfig& c, std::ostream& out) {
  const auto optimizers = split_list(optimizer_list);
  if (optimizers.empty()) fail(kBadConfig, "no optimizers given");
  for (const auto& o : optimizers)
    if (std::find(kOptimizers.begin(), kOptimizers.end(), o) == kOptimizers.end())
      fail(kBadConfig, "unknown optimizer '" + o + "'");
  if (c.seeds < 2) fail(kBadConfig, "run comparison needs at least two seeds, got " + std::to_string(c.seeds));

  std::optional<RoadGraph> g;
  try {
    g = family_graph(family);
  } catch (const std::invalid_argument& e) {
    fail(kBadConfig, e.what());
  }
  const Problem p = finish_problem(g->vertices(), all_pairs_times(*g), c);

  struct Task {
    std::string optimizer;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& o : optimizers)
    for (int k = 0; k < c.seeds; ++k) tasks.push_back({o, c.seed + static_cast<std::uint64_t>(k)});

  std::vector<Outcome> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        results[k] = optimize(p, tasks[k].optimizer, c, tasks[k].seed, true);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t jobs = std::min<std::size_t>(c.jobs > 0 ? static_cast<std::size_t>(c.jobs) : hw, tasks.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const tdm::Error& err) {
      fail(kOptimizerFailure, err.what());
    }
  }

  double best_norm = INFINITY;
  for (const auto& r : results) best_norm = std::min(best_norm, r.record.final.normalized);
  const double common_threshold = 1.1 * best_norm;

  ordered_json report;
  report["family"] = family;
  report["vertices"] = p.ids.size();
  report["alpha"] = c.alpha;
  report["dims"] = c.dims;
  report["common_threshold"] = common_threshold;
  ordered_json per = ordered_json::object();
  std::vector<PlotSeries> series;
  for (const auto& o : optimizers) {
    std::vector<RunRecord> records;
    std::vector<double> own_iters;
    double best_raw = INFINITY;
    ordered_json runs = ordered_json::array();
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      if (tasks[k].optimizer != o) continue;
      const auto& r = results[k];
      records.push_back(r.record);
      best_raw = std::min(best_raw, r.record.final.raw);
      const auto own = iterations_to_reach(r.record, 1.1 * r.record.final.normalized);
      const auto common = iterations_to_reach(r.record, common_threshold);
      own_iters.push_back(own ? *own : r.record.iterations_used);
      ordered_json run;
      run["seed"] = tasks[k].seed;
      run["final_raw"] = r.record.final.raw;
      run["final_norm"] = r.record.final.normalized;
      run["iterations_used"] = r.record.iterations_used;
      run["iters_to_own_threshold"] = own ? ordered_json(*own) : ordered_json(nullptr);
      run["iters_to_common_threshold"] = common ? ordered_json(*common) : ordered_json(nullptr);
      if (r.kappa) run["kappa_final"] = *r.kappa;
      runs.push_back(std::move(run));
      PlotSeries s{o + " seed " + std::to_string(tasks[k].seed), {}};
      for (const auto& t : r.record.trajectory) s.values.push_back(t.normalized);
      series.push_back(std::move(s));
    }
    const auto stats = compare_runs(records);
    ordered_json entry;
    entry["iterations"] = effective_iters(c, o, true);
    entry["final_norm"] = {{"mean", stats.mean},
                           {"min", stats.min},
                           {"max", stats.max},
                           {"cv", stats.coefficient_of_variation}};
    entry["best_raw"] = best_raw;
    entry["median_iters_to_own_threshold"] = median(own_iters);
    entry["runs"] = std::move(runs);
    per[o] = std::move(entry);
  }
  report["optimizers"] = std::move(per);
  emit(c.out, dump(report), out);
  if (!c.svg.empty()) write_file(c.svg, render_trajectory_plot(series, "normalized stress, " + family));
  return kOk;
}

int cmd_render(const std::string& layout_path, const std::string& graph_path, const std::string& ingest,
               const std::string& out_path, std::ostream& out) {
  LabeledLayout layout;
  try {
    layout = parse_layout_json(read_file(layout_path));
  } catch (const MalformedFile& e) {
    fail(kValidation, e.what());
  }
  std::string svg;
  try {
    svg = graph_path.empty() ? render_svg(layout) : render_svg(layout, load_graph(graph_path, ingest_mode(ingest)));
  } catch (const IdMismatch& e) {
    fail(kValidation, e.what());
  }
  emit(out_path, svg, out);
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging();
  CLI::App app{"Travel-time embeddings of road networks"};
  app.require_subcommand(1);

  std::string graph_input, graph_out, graph_csv, graph_ingest = "endpoint";
  auto* graph = app.add_subcommand("graph", "parse and validate a road network");
  graph->add_option("network", graph_input, "network JSON file")->required();
  graph->add_option("--ingest", graph_ingest, "vertex model: endpoint | block");
  graph->add_option("--out", graph_out, "graph JSON output (stdout if unset)");
  graph->add_option("--csv", graph_csv, "also write the directed travel-time matrix");

  RunConfig embed_cfg;
  std::string embed_input;
  auto* embed = app.add_subcommand("embed", "embed a network or travel-time matrix");
  embed->add_option("input", embed_input, "network JSON or matrix CSV")->required();
  const auto embed_bindings = add_run_options(embed, embed_cfg);

  RunConfig bench_cfg;
  bench_cfg.optimizer = "sgd,majorization";
  bench_cfg.seeds = 25;
  std::string family;
  auto* bench = app.add_subcommand("bench", "compare optimizers over seeded restarts");
  bench->add_option("family", family, "grid:N | grid:RxC | tree:DEPTH | cycle:N | complete:N")->required();
  const auto bench_bindings = add_run_options(bench, bench_cfg);
  bench->add_option("--seeds", bench_cfg.seeds, "number of seeds (first is --seed)");

  std::string render_layout, render_graph, render_out, render_ingest = "endpoint";
  auto* render = app.add_subcommand("render", "draw a layout JSON as SVG");
  render->add_option("layout", render_layout, "layout JSON file")->required();
  render->add_option("--graph", render_graph, "network JSON supplying edges");
  render->add_option("--ingest", render_ingest, "vertex model: endpoint | block");
  render->add_option("--out", render_out, "SVG output (stdout if unset)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << code_tag(kBadConfig) << ": " << e.what() << '\n';
    return kBadConfig;
  }

  try {
    if (graph->parsed()) return cmd_graph(graph_input, graph_ingest, graph_out, graph_csv, out);
    if (embed->parsed()) {
      merge_config_file(embed, embed_cfg, embed_bindings);
      validate(embed_cfg, false);
      return cmd_embed(embed_input, embed_cfg, out);
    }
    if (bench->parsed()) {
      merge_config_file(bench, bench_cfg, bench_bindings);
      validate(bench_cfg, true);
      return cmd_bench(family, bench_cfg.optimizer, bench_cfg, out);
    }
    if (render->parsed()) return cmd_render(render_layout, render_graph, render_ingest, render_out, out);
  } catch (const Failure& f) {
    err << code_tag(f.code) << ": " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << code_tag(kOptimizerFailure) << ": " << e.what() << '\n';
    return kOptimizerFailure;
  }
  return kBadConfig;
}

} // namespace tdm::cli
