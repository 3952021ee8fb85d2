#include "sublab/jobs.hpp"

#include "sublab/tension.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

namespace sublab {

namespace {

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json wrap_payload(json payload) {
  json j;
  j["payload"] = std::move(payload);
  j["run"] = {{"timestamp", timestamp_now()}};
  return j;
}

const json& require(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError(ctx + "." + key, "missing field");
  return j.at(key);
}

OffsetSpec offsets_from_json(const json& j, const std::string& ctx) {
  try {
    if (j.contains("preset")) {
      const std::string preset = j.at("preset").get<std::string>();
      if (preset == "heisenberg_zero") return offsets_heisenberg_zero();
      if (preset == "sphere") return offsets_sphere(j.at("n").get<int>());
      if (preset == "projective")
        return offsets_projective(j.at("n").get<int>(), j.at("d_f").get<int>());
      if (preset == "submersion")
        return offsets_submersion(j.at("h_euc").get<double>());
      if (preset == "tension") {
        const auto d = j.at("d").get<std::vector<double>>();
        return offsets_tension(d);
      }
      throw ConfigError(ctx + ".preset", "unknown offset preset: " + preset);
    }
    const std::string mode = j.value("mode", "zero");
    if (mode == "zero") return OffsetSpec::zero();
    if (mode == "constant")
      return OffsetSpec::constant_value(j.at("value").get<double>(), "constant");
    if (mode == "per_index")
      return OffsetSpec::per_index_values(
          j.at("values").get<std::vector<double>>(), "per_index");
    throw ConfigError(ctx + ".mode", "unknown offset mode: " + mode);
  } catch (const json::exception& e) {
    throw ConfigError(ctx, e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx, e.what());
  }
}

DimMode mode_from_json(const json& j, const std::string& ctx) {
  const std::string mode = j.value("mode", "cr");
  if (mode == "cr") return DimMode::CR;
  if (mode == "carnot") return DimMode::Carnot;
  throw ConfigError(ctx + ".mode", "expected \"cr\" or \"carnot\"");
}

// Evaluates one check-list entry against a spectrum; returns merged reports.
std::vector<InequalityReport> run_check_entry(const json& jc,
                                              const Spectrum& spec,
                                              const std::string& ctx) {
  const auto& lambda = spec.eigenvalues;
  const std::string family = require(jc, "family", ctx).get<std::string>();
  const int k_min = jc.value("k_min", 1);
  const int k_max = jc.value("k_max", static_cast<int>(lambda.size()) - 1);
  const double tol_rel = jc.value("tol_rel", 1e-8);
  if (k_min < 1 || k_max + 1 > static_cast<int>(lambda.size()))
    throw ConfigError(ctx, "k range exceeds the spectrum length");

  std::vector<InequalityReport> out;
  if (family == "yang") {
    const DimMode mode = mode_from_json(jc, ctx);
    const int dim = require(jc, "dim", ctx).get<int>();
    const OffsetSpec offsets =
        offsets_from_json(jc.value("offsets", json{{"mode", "zero"}}), ctx + ".offsets");
    std::vector<double> ps = require(jc, "p", ctx).get<std::vector<double>>();
    for (double p : ps) {
      InequalityReport merged;
      bool first = true;
      for (int k = k_min; k <= k_max; ++k) {
        auto rep = yang_type_check(lambda, k, p, yang_constant(mode, dim, p),
                                   offsets, tol_rel);
        rep.dim_mode = mode;
        rep.dim_param = dim;
        if (first) {
          merged = rep;
          first = false;
        } else {
          merged.rows.push_back(rep.rows[0]);
        }
      }
      out.push_back(std::move(merged));
    }
  } else if (family == "average" || family == "power") {
    const DimMode mode = mode_from_json(jc, ctx);
    const int dim = require(jc, "dim", ctx).get<int>();
    double extra;
    if (jc.contains("extra"))
      extra = jc.at("extra").get<double>();
    else
      extra = mode == DimMode::CR ? -4.0 * spec.meta.potential_min
                                  : spec.meta.potential_min;
    InequalityReport merged;
    bool first = true;
    for (int k = k_min; k <= k_max; ++k) {
      auto rep = family == "average"
                     ? average_bound_check(lambda, k, mode, dim, extra, tol_rel)
                     : power_bound_check(lambda, k, mode, dim, extra, tol_rel);
      if (first) {
        merged = rep;
        first = false;
      } else {
        merged.rows.push_back(rep.rows[0]);
      }
    }
    out.push_back(std::move(merged));
  } else if (family == "implied") {
    const int dim = require(jc, "dim", ctx).get<int>();
    const double d_inf = jc.value("d_inf", -4.0 * spec.meta.potential_min);
    InequalityReport rep;
    rep.family = Family::AverageBound;
    rep.dim_param = dim;
    rep.tol_rel = tol_rel;
    rep.offsets_note = "implied_next_bound";
    for (int k = k_min; k <= k_max; ++k) {
      const double bound = implied_next_bound(
          std::span<const double>(lambda.data(), k), dim, d_inf);
      CheckRow row;
      row.k = k;
      row.lhs = lambda[k];
      row.rhs = bound;
      row.margin = bound - lambda[k];
      const double scale = std::max(std::abs(row.lhs), std::abs(row.rhs));
      row.rel_margin = scale > 0 ? row.margin / scale : 0.0;
      row.pass = row.margin >= -tol_rel * scale;
      rep.rows.push_back(row);
    }
    out.push_back(std::move(rep));
  } else {
    throw ConfigError(ctx + ".family", "unknown check family: " + family);
  }
  return out;
}

}  // namespace

GroupModel parse_model(const json& job) {
  return model_from_json(require(job, "model", "job"), "model");
}

GridDomain parse_grid(const json& job) {
  return grid_from_json(require(job, "grid", "job"), "grid");
}

Vec parse_potential(const json& job, const GridDomain& grid, json* descriptor_out) {
  json desc = job.value("potential", json{{"type", "zero"}});
  if (descriptor_out) *descriptor_out = desc;
  const std::string type = desc.value("type", "zero");
  const std::int64_t n = grid.size();
  try {
    if (type == "zero") return Vec::Zero(n);
    if (type == "constant")
      return Vec::Constant(n, desc.at("value").get<double>());
    if (type == "quadratic") {
      const auto center = desc.at("center").get<std::vector<double>>();
      const double scale = desc.at("scale").get<double>();
      if (static_cast<int>(center.size()) != grid.dim())
        throw ConfigError("potential.center", "dimension mismatch");
      Vec v(n);
      std::vector<double> p(grid.dim());
      for (std::int64_t node = 0; node < n; ++node) {
        grid.point_of(node, p);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
          const double d = p[a] - center[a];
          r2 += d * d;
        }
        v[node] = scale * r2;
      }
      return v;
    }
    if (type == "file") {
      const std::string path = desc.at("path").get<std::string>();
      std::ifstream is(path, std::ios::binary);
      if (!is) throw ConfigError("potential.path", "cannot open " + path);
      Vec v(n);
      is.read(reinterpret_cast<char*>(v.data()),
              static_cast<std::streamsize>(sizeof(double) * n));
      if (!is) throw ConfigError("potential.path", "file shorter than N doubles");
      return v;
    }
  } catch (const json::exception& e) {
    throw ConfigError("potential", e.what());
  }
  throw ConfigError("potential.type", "unknown potential type: " + type);
}

SolverOptions parse_solver_options(const json& job, std::int64_t n_unknowns) {
  const json solver = job.value("solver", json::object());
  SolverOptions opt;
  opt.k = solver.value("k", static_cast<int>(std::min<std::int64_t>(6, n_unknowns - 1)));
  opt.tol = solver.value("tol", 1e-8);
  opt.max_iter = solver.value("max_iter", 20000);
  opt.seed = solver.value("seed", std::uint64_t{20240624});
  opt.max_subspace = solver.value("max_subspace", 0);
  opt.block_size = solver.value("block_size", 3);
  opt.want_vectors = solver.value("vectors", false);
  opt.method = solver.value("method", std::string("auto"));
  opt.dense_cap = solver.value("dense_cap", 3000);
  return opt;
}

int run_solve(const json& job, bool verbose) {
  try {
    auto model = std::make_shared<GroupModel>(parse_model(job));
    auto grid = std::make_shared<GridDomain>(parse_grid(job));
    json pot_desc;
    const Vec potential = parse_potential(job, *grid, &pot_desc);
    const SolverOptions opt = parse_solver_options(job, grid->size());
    const json output = job.value("output", json::object());
    const std::string spec_path = output.value("spectrum", "spectrum.json");
    std::string vec_path = output.value("vectors", "");
    if (opt.want_vectors && vec_path.empty())
      vec_path = spec_path + ".vectors";

    if (verbose)
      std::cerr << "solve: " << model->describe() << " " << grid->describe()
                << " k=" << opt.k << "\n";

    AssembledOperator A = assemble(model, grid, potential);
    Spectrum spec;
    try {
      spec = smallest_eigenpairs(A, opt);
    } catch (const SolverFailure& f) {
      json payload = spectrum_to_json(f.partial, "");
      payload["meta"]["model_descriptor"] = model_to_json(*model);
      payload["meta"]["grid_descriptor"] = grid_to_json(*grid);
      payload["meta"]["potential_descriptor"] = pot_desc;
      write_json_file(spec_path, wrap_payload(payload));
      std::cerr << "solver failure: " << f.what() << "\n";
      return kExitSolverFailure;
    }
    if (opt.want_vectors && !vec_path.empty()) write_vectors_binary(vec_path, spec.vectors);
    json payload = spectrum_to_json(spec, opt.want_vectors ? vec_path : "");
    payload["meta"]["model_descriptor"] = model_to_json(*model);
    payload["meta"]["grid_descriptor"] = grid_to_json(*grid);
    payload["meta"]["potential_descriptor"] = pot_desc;
    write_json_file(spec_path, wrap_payload(payload));
    if (verbose) {
      std::cerr << "eigenvalues:";
      for (double l : spec.eigenvalues) std::cerr << " " << l;
      std::cerr << "\n";
    }
    return kExitOk;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("job", e.what());
  }
}

int run_check(const json& job, bool verbose) {
  const std::string spec_path = require(job, "spectrum", "job").get<std::string>();
  const json wrapped = load_json_file(spec_path);
  const json& payload = wrapped.contains("payload") ? wrapped.at("payload") : wrapped;
  Spectrum spec = spectrum_from_json(payload);

  const auto& checks = require(job, "checks", "job");
  if (!checks.is_array()) throw ConfigError("checks", "expected an array");

  std::vector<InequalityReport> reports;
  int idx = 0;
  for (const auto& jc : checks) {
    auto reps = run_check_entry(jc, spec, "checks[" + std::to_string(idx) + "]");
    for (auto& r : reps) reports.push_back(std::move(r));
    ++idx;
  }

  bool all_pass = true;
  for (const auto& rep : reports)
    for (const auto& row : rep.rows)
      if (!row.pass && !row.degenerate) all_pass = false;

  const json output = job.value("output", json::object());
  json payload_out;
  payload_out["source_spectrum"] = spec_path;
  json jreports = json::array();
  for (const auto& rep : reports) jreports.push_back(report_to_json(rep));
  payload_out["checks"] = jreports;
  payload_out["all_pass"] = all_pass;
  write_json_file(output.value("report", "report.json"), wrap_payload(payload_out));

  std::ostringstream csv;
  report_rows_to_csv(csv, reports);
  write_text_file(output.value("csv", "report.csv"), csv.str());

  if (verbose)
    std::cerr << "checks: " << reports.size() << " report(s), "
              << (all_pass ? "all pass" : "FAILURES") << "\n";
  return all_pass ? kExitOk : kExitCheckFailure;
}

int run_tension(const json& job, bool verbose) {
  try {
    auto model = std::make_shared<GroupModel>(parse_model(job));
    auto grid = std::make_shared<GridDomain>(parse_grid(job));
    const json jmap = require(job, "map", "job");

    MapSample f;
    if (jmap.contains("preset")) {
      f = map_preset(jmap.at("preset").get<std::string>(), *model, *grid);
    } else {
      const std::string target = require(jmap, "target", "map").get<std::string>();
      f.target = target == "heisenberg" ? TargetKind::Heisenberg
                                        : TargetKind::Euclidean;
      f.m = require(jmap, "m", "map").get<int>();
      for (const auto& comp : require(jmap, "components", "map")) {
        const auto vals = comp.get<std::vector<double>>();
        f.components.push_back(
            Eigen::Map<const Vec>(vals.data(), static_cast<std::int64_t>(vals.size())));
      }
    }
    f.validate_for(*model, *grid);

    const json jt = job.value("tension", json::object());
    AssembledOperator A = assemble(model, grid, Vec::Zero(grid->size()));
    TensionField tension = f.target == TargetKind::Euclidean
                               ? levi_tension_euclidean(A, f)
                               : levi_tension_heisenberg(A, f);

    double max_norm_sq = 0.0;
    std::int64_t trusted_count = 0;
    for (std::int64_t node = 0; node < grid->size(); ++node) {
      if (!tension.trusted[node]) continue;
      ++trusted_count;
      max_norm_sq = std::max(max_norm_sq, tension.norm_sq[node]);
    }

    const Vec siso = semi_isometry_residual(*model, *grid, f);
    double siso_max = 0.0, siso_sum = 0.0;
    for (std::int64_t node = 0; node < grid->size(); ++node) {
      if (!tension.trusted[node]) continue;
      siso_max = std::max(siso_max, siso[node]);
      siso_sum += siso[node];
    }
    const double siso_mean =
        trusted_count > 0 ? siso_sum / static_cast<double>(trusted_count) : 0.0;

    json payload;
    payload["model"] = model_to_json(*model);
    payload["grid"] = grid_to_json(*grid);
    payload["map"] = jmap;
    payload["tension"] = {
        {"component_count", static_cast<int>(tension.values.size())},
        {"max_trusted_norm_sq", max_norm_sq},
        {"max_trusted_norm", std::sqrt(max_norm_sq)},
        {"trusted_fraction",
         static_cast<double>(trusted_count) / static_cast<double>(grid->size())}};
    payload["semi_isometry"] = {{"max_trusted", siso_max},
                                {"mean_trusted", siso_mean}};

    if (jt.value("orthogonality", true)) {
      try {
        payload["orthogonality_residual"] = orthogonality_residual(
            *model, *grid, f, tension, jt.value("semi_iso_tol", 0.25));
      } catch (const std::invalid_argument& e) {
        payload["orthogonality_residual"] = nullptr;
        payload["orthogonality_note"] = e.what();
      }
    }

    const double coverage_min = jt.value("coverage_min", 0.25);
    ReillyQuantities q;
    bool have_reilly = false;
    try {
      q = reilly_quantities(*grid, *model, f, tension, coverage_min);
      have_reilly = true;
      payload["reilly"] = {{"energy", q.energy},
                          {"tension_integral", q.tension_integral},
                          {"volume", q.volume},
                          {"coverage", q.coverage}};
    } catch (const std::runtime_error& e) {
      payload["reilly"] = nullptr;
      payload["reilly_note"] = e.what();
    }

    // Optional spectrum hookups: lambda_2 for the Reilly bounds, eigenvectors
    // for the per-pair coefficients.
    if (job.contains("spectrum")) {
      const json swrapped = load_json_file(job.at("spectrum").get<std::string>());
      const json& spayload =
          swrapped.contains("payload") ? swrapped.at("payload") : swrapped;
      Spectrum spec = spectrum_from_json(spayload);
      if (have_reilly && spec.eigenvalues.size() >= 2 &&
          model->horizontal_rank() % 2 == 0) {
        const int n = model->horizontal_rank() / 2;
        const double l2 = spec.eigenvalues[1];
        auto energy_form =
            reilly_check(l2, n, q, ReillyMode::EnergyForm, jt.value("tol_rel", 1e-8));
        auto semi_form = reilly_check(l2, n, q, ReillyMode::SemiIsometricForm,
                                      jt.value("tol_rel", 1e-8));
        payload["reilly"]["lambda2"] = l2;
        payload["reilly"]["energy_form"] = report_to_json(energy_form);
        payload["reilly"]["semi_isometric_form"] = report_to_json(semi_form);
      }
      if (!spayload.at("vectors_file").is_null()) {
        spec.vectors = read_vectors_binary(
            spayload.at("vectors_file").get<std::string>());
        const Vec potential = parse_potential(job, *grid, nullptr);
        const DCoefficients dc = d_coefficients(*grid, tension, potential, spec);
        payload["d_coefficients"] = {{"d", dc.d}, {"d_inf", dc.d_inf}};
      }
    }

    const json output = job.value("output", json::object());
    write_json_file(output.value("report", "tension.json"), wrap_payload(payload));
    if (verbose)
      std::cerr << "tension: max |H_b|^2 = " << max_norm_sq
                << ", semi-isometry max = " << siso_max << "\n";
    return kExitOk;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("job", e.what());
  }
}

int run_sweep(const json& job, bool verbose) {
  const json jsweep = require(job, "sweep", "job");
  const int levels = jsweep.value("levels", 0);
  if (levels < 2) throw ConfigError("sweep.levels", "need at least 2 levels");
  const std::int64_t max_unknowns = jsweep.value("max_unknowns", std::int64_t{3000000});
  std::vector<double> reference;
  if (jsweep.contains("reference"))
    reference = jsweep.at("reference").get<std::vector<double>>();

  const GroupModel model = parse_model(job);
  const json jgrid = require(job, "grid", "job");

  json summary;
  summary["levels"] = json::array();
  std::ostringstream csv;
  csv.precision(17);

  std::vector<std::vector<double>> level_eigs;
  std::vector<double> level_h;
  bool csv_header_done = false;
  bool any_check_failed = false;
  int computed_levels = 0;

  for (int level = 0; level < levels; ++level) {
    json jg = jgrid;
    std::vector<double> h;
    if (jg.at("h").is_array())
      h = jg.at("h").get<std::vector<double>>();
    else
      h.assign(jg.at("box").size(), jg.at("h").get<double>());
    for (auto& hh : h) hh /= std::pow(2.0, level);
    jg["h"] = h;

    // size estimate before building
    std::int64_t est = 1;
    for (std::size_t a = 0; a < h.size(); ++a) {
      const double extent = jg.at("box").at(a).at(1).get<double>() -
                            jg.at("box").at(a).at(0).get<double>();
      est *= static_cast<std::int64_t>(std::floor(extent / h[a] - 1e-12));
    }
    if (est > max_unknowns) {
      summary["cap_note"] =
          "level " + std::to_string(level) + " needs " + std::to_string(est) +
          " unknowns (cap " + std::to_string(max_unknowns) +
          "); largest feasible level is " + std::to_string(level - 1);
      std::cerr << summary["cap_note"].get<std::string>() << "\n";
      if (computed_levels >= 2) break;
      throw ConfigError("sweep", summary["cap_note"].get<std::string>());
    }

    const GridDomain grid = grid_from_json(jg, "grid");
    const Vec potential = parse_potential(job, grid, nullptr);
    SolverOptions opt = parse_solver_options(job, grid.size());
    opt.want_vectors = false;
    AssembledOperator A =
        assemble(std::make_shared<GroupModel>(model),
                 std::make_shared<GridDomain>(grid), potential);
    Spectrum spec;
    try {
      spec = smallest_eigenpairs(A, opt);
    } catch (const SolverFailure& f) {
      std::cerr << "sweep level " << level << ": " << f.what() << "\n";
      return kExitSolverFailure;
    }

    std::vector<InequalityReport> reports;
    if (job.contains("checks")) {
      int idx = 0;
      for (const auto& jc : job.at("checks")) {
        auto reps =
            run_check_entry(jc, spec, "checks[" + std::to_string(idx) + "]");
        for (auto& r : reps) reports.push_back(std::move(r));
        ++idx;
      }
    }

    if (!csv_header_done) {
      csv << "level,h_min,n_unknowns";
      for (int i = 0; i < opt.k; ++i) csv << ",lambda_" << (i + 1);
      for (std::size_t r = 0; r < reports.size(); ++r)
        csv << "," << family_name(reports[r].family) << "_min_margin";
      csv << "\n";
      csv_header_done = true;
    }
    csv << level << ',' << *std::min_element(h.begin(), h.end()) << ','
        << grid.size();
    for (double l : spec.eigenvalues) csv << ',' << l;
    json jlevel;
    jlevel["level"] = level;
    jlevel["h"] = h;
    jlevel["n_unknowns"] = grid.size();
    jlevel["eigenvalues"] = spec.eigenvalues;
    json margins = json::array();
    for (const auto& rep : reports) {
      double mn = std::numeric_limits<double>::infinity();
      for (const auto& row : rep.rows) {
        mn = std::min(mn, row.rel_margin);
        if (!row.pass && !row.degenerate) any_check_failed = true;
      }
      csv << ',' << mn;
      margins.push_back({{"family", family_name(rep.family)}, {"min_rel_margin", mn}});
    }
    csv << '\n';
    jlevel["margins"] = margins;
    summary["levels"].push_back(jlevel);

    level_eigs.push_back(spec.eigenvalues);
    level_h.push_back(*std::min_element(h.begin(), h.end()));
    ++computed_levels;
    if (verbose)
      std::cerr << "level " << level << ": N=" << grid.size()
                << " lambda_1=" << spec.eigenvalues[0] << "\n";
  }

  // observed convergence orders for lambda_1
  json orders = json::array();
  if (!reference.empty()) {
    for (std::size_t l = 0; l + 1 < level_eigs.size(); ++l) {
      const double e0 = std::abs(level_eigs[l][0] - reference[0]);
      const double e1 = std::abs(level_eigs[l + 1][0] - reference[0]);
      if (e0 > 0 && e1 > 0) orders.push_back(std::log2(e0 / e1));
    }
  } else {
    for (std::size_t l = 0; l + 2 < level_eigs.size(); ++l) {
      const double d0 = std::abs(level_eigs[l][0] - level_eigs[l + 1][0]);
      const double d1 = std::abs(level_eigs[l + 1][0] - level_eigs[l + 2][0]);
      if (d0 > 0 && d1 > 0) orders.push_back(std::log2(d0 / d1));
    }
  }
  summary["observed_orders_lambda_1"] = orders;

  const json output = job.value("output", json::object());
  write_text_file(output.value("csv", "sweep.csv"), csv.str());
  write_json_file(output.value("summary", "sweep.json"), wrap_payload(summary));
  return any_check_failed ? kExitCheckFailure : kExitOk;
}

int run_lemma_lab(int dim, int trials, const std::vector<double>& p_values,
                  std::uint64_t seed, const std::string& out_path, bool verbose) {
  if (dim < 1) throw ConfigError("dim", "dim must be >= 1");
  if (trials < 0) throw ConfigError("trials", "trials must be >= 0");
  if (dim > 3000) throw ConfigError("dim", "dim exceeds the dense cap");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_symmetric = [&](int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(rng);
    return Mat(0.5 * (m + m.transpose()));
  };

  std::int64_t checks_run = 0, failures = 0, degenerate = 0;
  double min_margin = 0.0, min_rel_margin = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int d = dim <= 2 ? dim : 2 + static_cast<int>(rng() % (dim - 1));
    const Mat A = random_symmetric(d);
    const Mat B = random_symmetric(d);
    for (double p : p_values) {
      for (int k = 1; k <= d - 2; ++k) {
        auto rep = commutator_lemma_check(A, B, k, p, 1e-10);
        const auto& row = rep.rows[0];
        ++checks_run;
        if (row.degenerate) ++degenerate;
        min_margin = std::min(min_margin, row.margin);
        min_rel_margin = std::min(min_rel_margin, row.rel_margin);
        if (!row.pass && !row.degenerate) ++failures;
      }
    }
  }

  json payload;
  payload["dim_max"] = dim;
  payload["trials"] = trials;
  payload["p"] = p_values;
  payload["seed"] = seed;
  payload["checks_run"] = checks_run;
  payload["failures"] = failures;
  payload["degenerate"] = degenerate;
  payload["min_margin"] = min_margin;
  payload["min_rel_margin"] = min_rel_margin;
  if (!out_path.empty()) write_json_file(out_path, wrap_payload(payload));
  if (verbose)
    std::cerr << "lemma lab: " << checks_run << " checks, " << failures
              << " failures, min margin " << min_margin << "\n";
  return failures > 0 ? kExitCheckFailure : kExitOk;
}

}  // namespace sublab
