#include "ptrlab/experiments.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "ptrlab/connecting.hpp"
#include "ptrlab/csv.hpp"
#include "ptrlab/distance.hpp"
#include "ptrlab/focusing.hpp"
#include "ptrlab/presets.hpp"
#include "ptrlab/ptr.hpp"
#include "ptrlab/random.hpp"

namespace ptrlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

template <typename T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing config field: " + key);
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError("bad value for config field: " + key);
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError("bad value for config field: " + key);
  }
}

struct Instance {
  DomainGrid grid;
  Medium medium;
  std::string medium_name;
};

Instance build_instance(const json& cfg) {
  const json med = require<json>(cfg, "medium");
  const json grid_cfg = get_or<json>(cfg, "grid", json::object());
  const int resolution = get_or<int>(grid_cfg, "resolution", 0);
  const double T = get_or<double>(grid_cfg, "T", 0.0);

  Instance inst;
  if (med.contains("preset")) {
    const Preset& p = find_preset(require<std::string>(med, "preset"));
    PresetInstance pi = instantiate_preset(p, resolution, T);
    inst.grid = std::move(pi.grid);
    inst.medium = std::move(pi.medium);
    inst.medium_name = p.name;
  } else if (med.contains("inline")) {
    const json in = med.at("inline");
    const int dim = require<int>(in, "dim");
    if (dim != 1 && dim != 2) throw ConfigError("medium.inline.dim must be 1 or 2");
    std::vector<double> extents = get_or<std::vector<double>>(
        in, "extent", std::vector<double>(dim, 1.0));
    if (static_cast<int>(extents.size()) != dim)
      throw ConfigError("medium.inline.extent size must match dim");
    const int res = resolution > 0 ? resolution : 64;
    const double horizon_T = T > 0.0 ? T : 1.5;
    const double c_const = get_or<double>(in, "c_const", 1.0);
    const double q_const = get_or<double>(in, "q_const", 0.0);
    const double eta_const = get_or<double>(in, "eta_const", 0.0);
    std::vector<int> res_v(dim, res);
    inst.grid = build_grid(extents, res_v, horizon_T, c_const);
    if (in.contains("c")) {
      // Inline field table, row-major over nodes.
      const auto table = require<std::vector<double>>(in, "c");
      if (table.size() != static_cast<std::size_t>(inst.grid.n_nodes()))
        throw ConfigError("medium.inline.c table size must equal node count");
      double c_max = 0.0;
      for (double c : table) {
        if (!(c > 0.0)) throw ConfigError("medium.inline.c must be positive");
        c_max = std::max(c_max, c);
      }
      inst.grid = build_grid(extents, res_v, horizon_T, c_max);
      inst.medium.c = table;
      inst.medium.q.assign(inst.grid.n_nodes(), q_const);
      inst.medium.eta.assign(inst.grid.n_boundary(), eta_const);
      inst.medium.c_min = *std::min_element(table.begin(), table.end());
      inst.medium.c_max = c_max;
    } else {
      inst.medium = make_medium(
          inst.grid, [&](double, double) { return c_const; },
          [&](double, double) { return q_const; },
          [&](double, double) { return eta_const; });
    }
    attach_boundary_metric(inst.grid, inst.medium);
    inst.medium_name = "inline";
  } else {
    throw ConfigError("medium must name a preset or give inline fields");
  }
  return inst;
}

ProjectorSpec parse_projector(const Instance& inst, const json& arr) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError("projector must be a nonempty array of patches");
  ProjectorSpec spec;
  for (const auto& p : arr) {
    ProjectorSpec::Patch patch;
    patch.T_j = require<double>(p, "T_j");
    if (get_or<bool>(p, "whole", false)) {
      patch.gamma = whole_boundary(inst.grid);
    } else {
      const int center = require<int>(p, "center");
      const double radius = get_or<double>(p, "radius", 0.0);
      patch.gamma = boundary_patch(inst.grid, center, radius);
    }
    if (patch.gamma.empty()) throw ConfigError("projector: empty patch Gamma");
    spec.patches.push_back(std::move(patch));
  }
  validate_projector(inst.grid, spec);
  return spec;
}

BoundarySignal parse_source(const Instance& inst, const json& cfg,
                            std::uint64_t seed) {
  const json src = get_or<json>(cfg, "source", json::object());
  const std::string kind = get_or<std::string>(src, "kind", "random-smooth");
  if (kind == "random-smooth") {
    const int bumps = get_or<int>(src, "bumps_per_node", 3);
    return random_smooth_signal(inst.grid, seed, bumps);
  }
  if (kind == "impulse") {
    const int b = get_or<int>(src, "boundary_pos", 0);
    const int k = get_or<int>(src, "time_index", 3);
    return make_impulse(inst.grid, b, k);
  }
  throw ConfigError("unknown source.kind: " + kind);
}

// ---------------------------------------------------------------------------
// Run context
// ---------------------------------------------------------------------------

struct RunContext {
  json cfg;
  Instance inst;
  fs::path outdir;
  json manifest;
  std::vector<std::string> outputs;

  std::string declare(const std::string& filename) {
    outputs.push_back(filename);
    return (outdir / filename).string();
  }
};

IterationConfig iteration_config(const json& section, std::uint64_t seed) {
  IterationConfig cfg;
  cfg.alpha = get_or<double>(section, "alpha", 1e-2);
  cfg.omega = get_or<double>(section, "omega", 0.0);
  cfg.n_max = get_or<long>(section, "n_max", 0);
  cfg.tol_fp = get_or<double>(section, "tol", 1e-6);
  cfg.seed = seed;
  return cfg;
}

void run_blago(RunContext& ctx, const ConnectingOperator& op) {
  const json section = get_or<json>(ctx.cfg, "blago", json::object());
  const int pairs = get_or<int>(section, "pairs", 10);
  const std::uint64_t seed = get_or<std::uint64_t>(ctx.cfg, "seed", 1);

  CsvWriter csv(ctx.declare("blago_check.csv"));
  csv.comment("boundary-only inner products <Kf,h> against volume inner products");
  csv.header({"pair", "boundary_value", "volume_value", "rel_error"});
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const BoundarySignal f =
        random_smooth_signal(ctx.inst.grid, hash_combine(seed, 2 * i), 3);
    const BoundarySignal h =
        random_smooth_signal(ctx.inst.grid, hash_combine(seed, 2 * i + 1), 3);
    const double boundary_value = op.blago_inner_product(f, h);
    const ForwardSolution uf =
        solve_forward(ctx.inst.grid, ctx.inst.medium, f, {ctx.inst.grid.T()});
    const ForwardSolution uh =
        solve_forward(ctx.inst.grid, ctx.inst.medium, h, {ctx.inst.grid.T()});
    const double volume_value = inner_product_volume(
        ctx.inst.grid, ctx.inst.medium, uf.snapshots[0].u, uh.snapshots[0].u);
    const double scale =
        volume_norm(ctx.inst.grid, ctx.inst.medium, uf.snapshots[0].u) *
        volume_norm(ctx.inst.grid, ctx.inst.medium, uh.snapshots[0].u);
    const double rel = std::abs(boundary_value - volume_value) /
                       std::max(scale, 1e-300);
    worst = std::max(worst, rel);
    csv.row({static_cast<double>(i), boundary_value, volume_value, rel});
  }
  ctx.manifest["results"]["worst_rel_error"] = worst;
}

void run_control(RunContext& ctx, const ConnectingOperator& op) {
  const json section = get_or<json>(ctx.cfg, "control", json::object());
  const std::uint64_t seed = get_or<std::uint64_t>(ctx.cfg, "seed", 1);
  const ProjectorSpec B =
      parse_projector(ctx.inst, require<json>(section, "projector"));
  const auto alphas = require<std::vector<double>>(section, "alphas");
  const BoundarySignal f = parse_source(ctx.inst, ctx.cfg, seed);
  IterationConfig cfg = iteration_config(section, seed);

  const auto points =
      control_limit(op, ctx.inst.grid, ctx.inst.medium, f, B, alphas, cfg);

  CsvWriter csv(ctx.declare("control.csv"));
  csv.comment("regularization path: e(alpha) = ||u^{h(a)}(T) - chi_N u^f(T)|| / ||u^f(T)||");
  csv.header({"alpha", "e_alpha", "steps", "queries", "residual_rel",
              "converged", "omega"});
  long total_queries = 0;
  for (const auto& pt : points) {
    total_queries += pt.iteration.queries;
    csv.row({pt.alpha, pt.e_alpha, static_cast<double>(pt.iteration.steps),
             static_cast<double>(pt.iteration.queries),
             pt.iteration.residual_rel, pt.iteration.converged ? 1.0 : 0.0,
             pt.iteration.omega});
  }
  write_signal_csv(ctx.declare("control_final_iterate.csv"), ctx.inst.grid,
                   points.back().iteration.h, "h(alpha_min)");
  ctx.manifest["results"]["final_e_alpha"] = points.back().e_alpha;
  ctx.manifest["results"]["omega"] = points.front().iteration.omega;
  ctx.manifest["results"]["queries"] = total_queries;
}

void run_focus(RunContext& ctx, const ConnectingOperator& op) {
  const json section = get_or<json>(ctx.cfg, "focus", json::object());
  const std::uint64_t seed = get_or<std::uint64_t>(ctx.cfg, "seed", 1);
  FocusSpec spec;
  spec.z_pos = require<int>(section, "z");
  spec.T_hat = require<double>(section, "T_hat");
  spec.T0 = require<double>(section, "T0");
  spec.j_max = get_or<int>(section, "j_max", ctx.inst.grid.dim == 1 ? 0 : 3);
  spec.r0 = get_or<double>(section, "r0", 0.0);
  spec.alphas = get_or<std::vector<double>>(section, "alphas", {1e-2, 1e-3});
  validate_focus_spec(ctx.inst.grid, spec);
  const BoundarySignal f = parse_source(ctx.inst, ctx.cfg, seed);
  IterationConfig cfg = iteration_config(section, seed);

  CsvWriter csv(ctx.declare("focus_concentration.csv"));
  csv.comment("concentration of u^{h~}(T) around x_hat per patch level j");
  csv.header({"j", "alpha", "rho", "mass_fraction", "slab_fraction",
              "total_mass", "queries"});
  long total_queries = 0;
  BoundarySignal last_h;
  for (int j = 0; j <= spec.j_max; ++j) {
    const FocusingSource src = focusing_source(op, f, spec, cfg, j);
    const ConcentrationReport rep =
        focusing_profile(ctx.inst.grid, ctx.inst.medium, src.h_tilde, spec);
    const long q = src.run_b.queries + src.run_bprime.queries;
    total_queries += q;
    for (std::size_t r = 0; r < rep.radii.size(); ++r)
      csv.row({static_cast<double>(j), spec.alphas.back(), rep.radii[r],
               rep.mass_fraction[r], rep.slab_fraction, rep.total_mass,
               static_cast<double>(q)});
    last_h = src.h_tilde;
  }
  write_signal_csv(ctx.declare("focus_source.csv"), ctx.inst.grid, last_h,
                   "h_tilde (finest j)");
  const ForwardSolution sol =
      solve_forward(ctx.inst.grid, ctx.inst.medium, last_h, {ctx.inst.grid.T()});
  write_field_csv(ctx.declare("focus_field.csv"), ctx.inst.grid,
                  sol.snapshots[0].u, "u^{h~}(T) (finest j)");
  ctx.manifest["results"]["queries"] = total_queries;
}

void run_distance(RunContext& ctx, const ConnectingOperator& op) {
  const json section = get_or<json>(ctx.cfg, "distance", json::object());
  const std::uint64_t seed = get_or<std::uint64_t>(ctx.cfg, "seed", 1);
  const json queries = require<json>(section, "queries");
  if (!queries.is_array() || queries.empty())
    throw ConfigError("distance.queries must be a nonempty array");
  const BoundarySignal f = parse_source(ctx.inst, ctx.cfg, seed);
  IterationConfig cfg = iteration_config(section, seed);

  CsvWriter summary(ctx.declare("distance_summary.csv"));
  summary.comment("d(gamma_{z,nu}(T1), y) from boundary data (bisection over tau)");
  summary.header({"query", "z", "y", "T1", "estimate", "lo", "hi", "ok", "queries"});
  CsvWriter trace(ctx.declare("distance_trace.csv"));
  trace.comment("per-query decision trace: <Kp,p> vs tau");
  trace.header({"query", "tau", "value", "outcome"});

  int qi = 0;
  for (const auto& qj : queries) {
    DistanceQuery q;
    q.z_pos = require<int>(qj, "z");
    q.y_pos = require<int>(qj, "y");
    q.T1 = require<double>(qj, "T1");
    q.theta = get_or<double>(section, "theta", 1e-3);
    q.j_levels = get_or<int>(section, "j_levels", 4);
    q.alpha = get_or<double>(section, "alpha", 1e-3);
    q.eps_list = get_or<std::vector<double>>(section, "eps", {});
    validate_distance_query(ctx.inst.grid, ctx.inst.medium, q);
    const DistanceEstimate est = boundary_distance(op, f, q, cfg);
    summary.row({static_cast<double>(qi), static_cast<double>(q.z_pos),
                 static_cast<double>(q.y_pos), q.T1, est.value, est.lo, est.hi,
                 est.ok ? 1.0 : 0.0, static_cast<double>(est.queries)});
    for (const auto& tp : est.trace)
      trace.row({static_cast<double>(qi), tp.tau, tp.value,
                 static_cast<double>(tp.outcome)});
    ++qi;
  }
}

void run_arrival(RunContext& ctx, const MeasurementOracle& oracle) {
  const json section = get_or<json>(ctx.cfg, "arrival", json::object());
  const int stride = get_or<int>(section, "stride", 1);
  const int separation = get_or<int>(section, "separation", 0);

  const ArrivalMap map = arrival_time_map(oracle, stride);
  const DomainGrid& grid = ctx.inst.grid;

  CsvWriter csv(ctx.declare("arrival_map.csv"));
  csv.comment("pairwise boundary travel times from first-arrival picking");
  std::vector<std::string> cols{"source_pos"};
  for (int r = 0; r < grid.n_boundary(); ++r)
    cols.push_back("r" + std::to_string(r));
  csv.header(cols);
  for (std::size_t s = 0; s < map.sources.size(); ++s) {
    std::vector<double> row{static_cast<double>(map.sources[s])};
    for (int r = 0; r < grid.n_boundary(); ++r)
      row.push_back(map.d[s * grid.n_boundary() + r]);
    csv.row(row);
  }

  const BoundarySpeed speed = boundary_wavespeed(map, grid, separation);
  CsvWriter sp(ctx.declare("boundary_speed.csv"));
  sp.comment("boundary wave speed from short-distance arrival ratios");
  sp.header({"pos", "x", "y", "c_estimate", "near_corner"});
  for (int p = 0; p < grid.n_boundary(); ++p) {
    const int n = grid.boundary_nodes[p];
    sp.row({static_cast<double>(p), grid.x_of(n), grid.y_of(n), speed.c[p],
            static_cast<double>(speed.near_corner[p])});
  }
  ctx.manifest["results"]["queries"] = map.queries;
}

void run_noise_avg(RunContext& ctx, const MeasurementOracle& inner,
                   const Convention& convention) {
  const json section = get_or<json>(ctx.cfg, "noise", json::object());
  if (!ctx.cfg.contains("seed"))
    throw ConfigError("noise-avg requires an explicit seed");
  const std::uint64_t seed = require<std::uint64_t>(ctx.cfg, "seed");

  NoiseCovarianceSpec spec;
  spec.sigma = require<double>(section, "sigma");
  spec.ell_t = get_or<double>(section, "ell_t", 8.0 * ctx.inst.grid.dt);
  spec.ell_x = get_or<double>(section, "ell_x", 4.0 * ctx.inst.grid.h);
  validate_noise_spec(spec);
  const long K = get_or<long>(section, "K", 256);
  std::vector<long> checkpoints =
      get_or<std::vector<long>>(section, "checkpoints", {});
  if (checkpoints.empty())
    for (long k = 4; k <= K; k *= 2) checkpoints.push_back(k);

  const ProjectorSpec B =
      parse_projector(ctx.inst, require<json>(section, "projector"));
  const auto mask = projector_mask(ctx.inst.grid, B);
  const BoundarySignal f = parse_source(ctx.inst, ctx.cfg, seed);
  IterationConfig cfg = iteration_config(section, seed);

  // Clean reference h(alpha) on the noise-free oracle.
  ConnectingOperator clean_op(inner, convention);
  const IterationResult clean = ptr_iterate(clean_op, f, mask, cfg);

  NoisyOracle noisy(inner, spec, seed);
  ConnectingOperator noisy_op(noisy, convention);
  IterationConfig noisy_cfg = cfg;
  noisy_cfg.omega = clean.omega;  // identical recursion constants
  const NoisyAverageResult avg =
      averaged_noisy_iterate(noisy_op, f, mask, noisy_cfg, K, checkpoints);

  CsvWriter csv(ctx.declare("noise_avg.csv"));
  csv.comment("averaged noisy iterates against the noise-free control h(alpha)");
  csv.header({"K", "deviation_norm"});
  for (const auto& [k, h_ave] : avg.checkpoints) {
    BoundarySignal diff = h_ave;
    diff -= clean.h;
    csv.row({static_cast<double>(k), boundary_norm(ctx.inst.grid, diff)});
  }
  write_signal_csv(ctx.declare("noise_avg_final.csv"), ctx.inst.grid,
                   avg.average, "h~_K^ave");
  ctx.manifest["results"]["omega"] = avg.omega;
  ctx.manifest["results"]["queries"] = avg.queries;
  ctx.manifest["results"]["clean_converged"] = clean.converged;
}

// ---------------------------------------------------------------------------

RunOutcome run_parsed(const std::string& config_path, bool execute) {
  RunOutcome outcome;
  json cfg;
  RunContext ctx;
  try {
    cfg = load_json(config_path);
    ctx.cfg = cfg;
    ctx.inst = build_instance(cfg);
    const std::string kind = require<std::string>(cfg, "experiment");
    const std::vector<std::string> kinds{"blago-check", "control",  "focus",
                                         "distance",    "arrival-map",
                                         "noise-avg"};
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
      throw ConfigError("unknown experiment kind: " + kind);
    if (kind == "noise-avg" && !cfg.contains("seed"))
      throw ConfigError("noise-avg requires an explicit seed");
  } catch (const ConfigError& e) {
    outcome.exit_code = kConfigError;
    outcome.message = e.what();
    return outcome;
  } catch (const std::invalid_argument& e) {
    outcome.exit_code = kConfigError;
    outcome.message = e.what();
    return outcome;
  }
  if (!execute) return outcome;

  const auto t_start = std::chrono::steady_clock::now();
  try {
    std::string outdir = get_or<std::string>(cfg, "output_dir", "ptrlab-out");
    if (const char* env = std::getenv("PTRLAB_OUTPUT_DIR")) outdir = env;
    ctx.outdir = outdir;
    fs::create_directories(ctx.outdir);

    const std::string kind = require<std::string>(cfg, "experiment");
    const FilterVariant variant = filter_variant_from_string(
        get_or<std::string>(cfg, "filter_variant", "intro"));

    IdealOracle ideal(ctx.inst.grid, ctx.inst.medium);
    std::unique_ptr<CachedOracle> cached;
    const std::string flavor = get_or<std::string>(
        get_or<json>(cfg, "oracle", json::object()), "flavor", "ideal");
    if (flavor == "cached")
      cached = std::make_unique<CachedOracle>(assemble_cached(ideal));
    else if (flavor != "ideal")
      throw ConfigError("oracle.flavor must be ideal or cached");
    const MeasurementOracle& oracle =
        cached ? static_cast<const MeasurementOracle&>(*cached) : ideal;

    const Convention convention = resolve_convention(oracle, variant);
    ConnectingOperator op(oracle, convention);

    ctx.manifest["version"] = kVersion;
    ctx.manifest["config"] = cfg;
    ctx.manifest["resolved"]["filter_variant"] = to_string(convention.variant);
    ctx.manifest["resolved"]["sign"] = convention.sign;
    ctx.manifest["resolved"]["medium"] = ctx.inst.medium_name;
    ctx.manifest["resolved"]["grid"] = {{"dim", ctx.inst.grid.dim},
                                        {"nx", ctx.inst.grid.nx},
                                        {"ny", ctx.inst.grid.ny},
                                        {"h", ctx.inst.grid.h},
                                        {"dt", ctx.inst.grid.dt},
                                        {"n_time", ctx.inst.grid.n_time},
                                        {"horizon", ctx.inst.grid.horizon}};
    ctx.manifest["resolved"]["oracle_flavor"] = flavor;

    if (kind == "blago-check") run_blago(ctx, op);
    else if (kind == "control") run_control(ctx, op);
    else if (kind == "focus") run_focus(ctx, op);
    else if (kind == "distance") run_distance(ctx, op);
    else if (kind == "arrival-map") run_arrival(ctx, oracle);
    else run_noise_avg(ctx, oracle, convention);

    ctx.manifest["query_count"] = oracle.query_count();
    ctx.manifest["outputs"] = ctx.outputs;
    const auto t_end = std::chrono::steady_clock::now();
    ctx.manifest["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start)
            .count();

    const fs::path manifest_path = ctx.outdir / "manifest.json";
    std::ofstream mout(manifest_path);
    mout << ctx.manifest.dump(2) << '\n';
    outcome.manifest_path = manifest_path.string();
    outcome.outputs = ctx.outputs;
  } catch (const ConfigError& e) {
    outcome.exit_code = kConfigError;
    outcome.message = e.what();
  } catch (const std::invalid_argument& e) {
    outcome.exit_code = kConfigError;
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kNumericalError;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace

RunOutcome run_experiment(const std::string& config_path) {
  return run_parsed(config_path, true);
}

RunOutcome validate_config(const std::string& config_path) {
  return run_parsed(config_path, false);
}

void print_presets(std::ostream& out) {
  out << "name             dim  resolution  c_min  c_max  recommended_T  description\n";
  for (const Preset& p : preset_catalog()) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %3d  %10d  %5.2f  %5.2f  %13.2f  %s\n",
                  p.name.c_str(), p.dim, p.default_resolution, p.c_min, p.c_max,
                  p.recommended_T, p.description.c_str());
    out << line;
  }
}

}  // namespace ptrlab
