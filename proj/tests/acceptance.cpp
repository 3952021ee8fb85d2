// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include "sublab/jobs.hpp"
#include "sublab/tension.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace sublab;
namespace fs = std::filesystem;

namespace {

struct Roster {
  std::string name;
  GroupModel model;
  GridDomain grid;
};

StructureConstants heisenberg_like_c() {
  Eigen::MatrixXd c1 = Eigen::MatrixXd::Zero(2, 2);
  c1(0, 1) = -4.0;
  c1(1, 0) = 4.0;
  return {c1};
}

StructureConstants levi_civita_c() {
  StructureConstants c(3, Eigen::MatrixXd::Zero(3, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int perm = (i - j) * (j - k) * (k - i);
        if (perm != 0) c[k](i, j) = perm > 0 ? 0.5 : -0.5;
      }
  return c;
}

std::vector<Roster> make_roster() {
  std::vector<Roster> r;
  r.push_back({"abelian_1d", GroupModel::abelian(1),
               build_grid({{0.0, 1.0}}, {1.0 / 32})});
  r.push_back({"abelian_2d", GroupModel::abelian(2),
               build_grid({{0.0, 1.0}, {0.0, 1.0}}, {1.0 / 16, 1.0 / 16})});
  Indicator ball;
  ball.type = Indicator::Type::Ball;
  ball.center = {0.5, 0.5};
  ball.radius = 0.45;
  r.push_back({"abelian_2d_ball", GroupModel::abelian(2),
               build_grid({{0.0, 1.0}, {0.0, 1.0}}, {1.0 / 16, 1.0 / 16}, ball)});
  r.push_back({"heisenberg_1", GroupModel::heisenberg(1),
               build_grid({{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
                          {1.0 / 8, 1.0 / 8, 1.0 / 16})});
  r.push_back({"heisenberg_1_aniso", GroupModel::heisenberg(1),
               build_grid({{0.0, 2.0}, {0.0, 1.0}, {0.0, 1.0}},
                          {1.0 / 6, 1.0 / 8, 1.0 / 12})});
  r.push_back({"heisenberg_2", GroupModel::heisenberg(2),
               build_grid(std::vector<std::array<double, 2>>(5, {0.0, 1.0}),
                          std::vector<double>(5, 0.25))});
  r.push_back({"carnot_heisenberg_like", GroupModel::carnot_step2(2, 1, heisenberg_like_c()),
               build_grid({{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
                          {1.0 / 8, 1.0 / 8, 1.0 / 16})});
  r.push_back({"carnot_free_3", GroupModel::carnot_step2(3, 3, levi_civita_c()),
               build_grid(std::vector<std::array<double, 2>>(6, {0.0, 1.0}),
                          std::vector<double>(6, 0.25))});
  return r;
}

double symmetry_defect(const SparseMat& m) {
  const SparseMat t = m.transpose();
  double worst = 0.0;
  for (int r = 0; r < m.outerSize(); ++r) {
    SparseMat::InnerIterator a(m, r), b(t, r);
    for (; a || b; ++a, ++b) {
      if (!a || !b || a.col() != b.col()) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(a.value() - b.value()));
    }
  }
  return worst;
}

Vec quadratic_potential(const GridDomain& g, double scale) {
  Vec v(g.size());
  std::vector<double> p(g.dim());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    g.point_of(i, p);
    double r2 = 0.0;
    for (double x : p) r2 += (x - 0.5) * (x - 0.5);
    v[i] = scale * r2;
  }
  return v;
}

Spectrum solve_box(const GroupModel& model, const GridDomain& grid, int k,
                   double tol, bool vectors = false,
                   const Vec* potential = nullptr) {
  AssembledOperator a =
      potential ? assemble(model, grid, *potential) : assemble(model, grid);
  SolverOptions opt;
  opt.k = k;
  opt.tol = tol;
  opt.want_vectors = vectors;
  opt.seed = 20240624;
  return smallest_eigenpairs(a, opt);
}

GridDomain h1_grid(double hx, double ht) {
  return build_grid({{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, {hx, hx, ht});
}

double max_trusted(const Vec& v, const std::vector<char>& trusted) {
  double worst = 0.0;
  for (std::int64_t i = 0; i < v.size(); ++i)
    if (trusted[i]) worst = std::max(worst, std::abs(v[i]));
  return worst;
}

// Shared state: the criterion-4 spectrum feeds criteria 5 and 6.
Spectrum g_h1_spectrum;

bool criterion_1(std::ostream& os) {
  bool ok = true;
  for (const auto& entry : make_roster()) {
    for (int with_v = 0; with_v < 2; ++with_v) {
      const Vec v = with_v ? quadratic_potential(entry.grid, 3.0)
                           : Vec::Zero(entry.grid.size());
      const AssembledOperator a = assemble(entry.model, entry.grid, v);
      const double sym = symmetry_defect(a.matrix);
      const Spectrum s = dense_spectrum(a, 4000, false);
      const double norm =
          std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
      const double lam1 = s.eigenvalues.front();
      const bool good = (sym == 0.0) && (lam1 >= -1e-10 * norm);
      if (!good || entry.name == "abelian_1d")
        os << "    " << entry.name << (with_v ? "+V" : "") << ": sym=" << sym
           << " lambda_1=" << lam1 << "\n";
      ok = ok && good;
    }
  }
  return ok;
}

bool criterion_2(std::ostream& os) {
  const double target = 2.0 * std::numbers::pi * std::numbers::pi;
  std::vector<double> errs, hs;
  double lam_finest = 0.0;
  for (const int denom : {8, 16, 32, 64}) {
    const GridDomain g =
        build_grid({{0.0, 1.0}, {0.0, 1.0}}, {1.0 / denom, 1.0 / denom});
    const Spectrum s = solve_box(GroupModel::abelian(2), g, 1, 1e-10);
    errs.push_back(std::abs(s.eigenvalues[0] - target));
    hs.push_back(1.0 / denom);
    lam_finest = s.eigenvalues[0];
  }
  // least-squares slope of log err vs log h
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = static_cast<double>(errs.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double rel = errs.back() / target;
  os << "    lambda_1(h=1/64)=" << lam_finest << " target=" << target
     << " rel_err=" << rel << " observed_order=" << slope << "\n";
  return std::abs(slope - 2.0) <= 0.3 && rel <= 5e-3;
}

bool criterion_3(std::ostream& os) {
  bool ok = true;
  for (const auto& entry : make_roster()) {
    if (entry.grid.size() > 2000) continue;
    const AssembledOperator a = assemble(entry.model, entry.grid);
    const Spectrum dense = dense_spectrum(a, 4000, false);
    const int k = static_cast<int>(
        std::min<std::int64_t>(10, entry.grid.size() - 1));
    SolverOptions opt;
    opt.k = k;
    opt.tol = std::max(1e-8 * dense.eigenvalues.front(), 1e-12);
    opt.seed = 20240624;
    const Spectrum it = smallest_eigenpairs(a, opt);
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
      worst = std::max(worst, std::abs(it.eigenvalues[i] - dense.eigenvalues[i]) /
                                  std::abs(dense.eigenvalues[i]));
    os << "    " << entry.name << ": N=" << entry.grid.size()
       << " max_rel_dev=" << worst << " (" << it.meta.solver << ")\n";
    ok = ok && worst <= 1e-8;
  }
  return ok;
}

bool criterion_4(std::ostream& os) {
  const GridDomain grid = h1_grid(1.0 / 24, 1.0 / 48);
  g_h1_spectrum = solve_box(GroupModel::heisenberg(1), grid, 12, 1e-7);
  const auto& lam = g_h1_spectrum.eigenvalues;
  os << "    N=" << grid.size() << " lambda_1=" << lam[0]
     << " lambda_11=" << lam[10] << "\n";

  double worst_rel_margin = std::numeric_limits<double>::infinity();
  struct Violation { int k; double p; double rel; };
  std::vector<Violation> violations;
  for (const double p : {1.0, 2.0, 3.0}) {
    for (int k = 1; k <= 10; ++k) {
      const auto rep = yang_type_check(lam, k, p, yang_constant(DimMode::CR, 1, p),
                                       offsets_heisenberg_zero(), 1e-6);
      worst_rel_margin = std::min(worst_rel_margin, rep.rows[0].rel_margin);
      if (!rep.rows[0].pass) violations.push_back({k, p, rep.rows[0].rel_margin});
    }
  }
  os << "    worst relative margin = " << worst_rel_margin << "\n";
  if (violations.empty()) return true;

  // refine-and-retry: a genuine discretization artifact must shrink
  os << "    violations at h=1/24; refining once\n";
  const GridDomain fine = h1_grid(1.0 / 48, 1.0 / 96);
  AssembledOperator a = assemble(GroupModel::heisenberg(1), fine);
  SolverOptions opt;
  opt.k = 12;
  opt.tol = 1e-6;
  opt.method = "matvec";
  opt.max_subspace = 160;
  const Spectrum sf = smallest_eigenpairs(a, opt);
  bool ok = true;
  for (const auto& v : violations) {
    const auto rep = yang_type_check(sf.eigenvalues, v.k, v.p,
                                     yang_constant(DimMode::CR, 1, v.p),
                                     offsets_heisenberg_zero(), 1e-6);
    const double fine_rel = rep.rows[0].rel_margin;
    os << "    k=" << v.k << " p=" << v.p << ": rel margin " << v.rel << " -> "
       << fine_rel << "\n";
    ok = ok && (rep.rows[0].pass || std::abs(fine_rel) < 0.5 * std::abs(v.rel));
  }
  return ok;
}

bool criterion_5(std::ostream& os) {
  const auto& lam = g_h1_spectrum.eigenvalues;
  if (lam.empty()) { os << "    no spectrum\n"; return false; }
  bool ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 10; ++k) {
    const auto avg = average_bound_check(lam, k, DimMode::CR, 1, 0.0, 1e-6);
    const auto pow = power_bound_check(lam, k, DimMode::CR, 1, 0.0, 1e-6);
    const double bound =
        implied_next_bound(std::span<const double>(lam.data(), k), 1, 0.0);
    ok = ok && avg.rows[0].pass && pow.rows[0].pass;
    ok = ok && (bound >= lam[k] * (1.0 - 1e-6));
    ok = ok && (bound == avg.rows[0].rhs);
    worst = std::min({worst, avg.rows[0].rel_margin, pow.rows[0].rel_margin});
  }
  os << "    worst relative margin across k = " << worst << "\n";
  return ok;
}

bool criterion_6(std::ostream& os) {
  const auto& lam = g_h1_spectrum.eigenvalues;
  if (lam.empty()) { os << "    no spectrum\n"; return false; }
  bool identical = true, pass = true;
  for (const double p : {1.0, 2.0}) {
    for (int k = 1; k <= 10; ++k) {
      const auto cr = yang_type_check(lam, k, p, yang_constant(DimMode::CR, 1, p),
                                      OffsetSpec::zero(), 1e-6);
      const auto ca = yang_type_check(lam, k, p,
                                      yang_constant(DimMode::Carnot, 2, p),
                                      OffsetSpec::zero(), 1e-6);
      identical = identical && (cr.rows[0].rhs == ca.rows[0].rhs);
      pass = pass && cr.rows[0].pass && ca.rows[0].pass;
    }
  }
  for (int k = 1; k <= 10; ++k) {
    const auto cr = average_bound_check(lam, k, DimMode::CR, 1, 0.0, 1e-6);
    const auto ca = average_bound_check(lam, k, DimMode::Carnot, 2, 0.0, 1e-6);
    const auto crp = power_bound_check(lam, k, DimMode::CR, 1, 0.0, 1e-6);
    const auto cap = power_bound_check(lam, k, DimMode::Carnot, 2, 0.0, 1e-6);
    identical = identical && (cr.rows[0].rhs == ca.rows[0].rhs) &&
                (crp.rows[0].rhs == cap.rows[0].rhs);
    pass = pass && ca.rows[0].pass && cap.rows[0].pass;
  }
  os << "    rhs bit-identical=" << (identical ? "yes" : "NO")
     << " all pass=" << (pass ? "yes" : "NO") << "\n";
  return identical && pass;
}

bool criterion_7(std::ostream& os) {
  const double c = 2.5;
  const GridDomain grid = h1_grid(1.0 / 12, 1.0 / 24);
  const Spectrum s0 = solve_box(GroupModel::heisenberg(1), grid, 12, 1e-9);
  const Vec vc = Vec::Constant(grid.size(), c);
  const Spectrum sc =
      solve_box(GroupModel::heisenberg(1), grid, 12, 1e-9, false, &vc);
  double worst_shift = 0.0;
  for (int i = 0; i < 12; ++i)
    worst_shift = std::max(
        worst_shift, std::abs(sc.eigenvalues[i] - s0.eigenvalues[i] - c) /
                         std::abs(sc.eigenvalues[i]));
  os << "    max relative shift error = " << worst_shift << "\n";
  bool ok = worst_shift <= 1e-8;

  // shifted-potential form: offsets each eigenvalue by -T_i = -c
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const double p : {1.0, 2.0, 3.0})
    for (int k = 1; k <= 10; ++k) {
      const auto rep = yang_type_check(
          sc.eigenvalues, k, p, yang_constant(DimMode::CR, 1, p),
          OffsetSpec::constant_value(-c, "minus potential"), 1e-6);
      worst_margin = std::min(worst_margin, rep.rows[0].rel_margin);
      ok = ok && rep.rows[0].pass;
    }
  os << "    worst relative margin with the shifted offsets = " << worst_margin
     << "\n";
  return ok;
}

bool criterion_8(std::ostream& os) {
  std::mt19937_64 rng(31415);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_symmetric = [&](int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(rng);
    return Mat(0.5 * (m + m.transpose()));
  };
  std::int64_t checks = 0, failures = 0;
  double min_margin_scaled = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 28);
    const Mat a = random_symmetric(d);
    const Mat b = random_symmetric(d);
    for (const double p : {0.5, 1.0, 2.0, 3.0}) {
      for (int k = 1; k <= d - 2; ++k) {
        const auto rep = commutator_lemma_check(a, b, k, p, 1e-10);
        ++checks;
        const auto& row = rep.rows[0];
        const double scale = std::max(std::abs(row.lhs), std::abs(row.rhs));
        if (scale > 0.0)
          min_margin_scaled = std::min(min_margin_scaled, row.margin / scale);
        if (!row.pass && !row.degenerate) ++failures;
      }
    }
  }
  os << "    " << checks << " checks, " << failures
     << " failures, min margin/scale = " << min_margin_scaled << "\n";
  return failures == 0;
}

bool criterion_9(std::ostream& os) {
  std::vector<double> maxima, siso;
  for (const double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const GridDomain grid = h1_grid(h, h / 2.0);
    const GroupModel m = GroupModel::heisenberg(1);
    const AssembledOperator a = assemble(m, grid);
    const MapSample f = map_preset("scaled_projection", m, grid);
    const TensionField t = levi_tension_euclidean(a, f);
    Vec norm = t.norm_sq.cwiseSqrt();
    maxima.push_back(max_trusted(norm, t.trusted));
    siso.push_back(max_trusted(semi_isometry_residual(m, grid, f), t.trusted));
  }
  os << "    max trusted |H_b| per level:";
  for (double v : maxima) os << " " << v;
  os << "\n    semi-isometry residual at finest = " << siso.back() << "\n";
  bool ok = siso.back() <= 5e-3;
  for (std::size_t l = 0; l + 1 < maxima.size(); ++l)
    ok = ok && (maxima[l + 1] <= maxima[l] / 3.0 || maxima[l + 1] <= 1e-12);
  return ok;
}

bool criterion_10(std::ostream& os) {
  std::vector<double> maxima;
  bool structural = true;
  for (const double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const GridDomain grid = h1_grid(h, h / 2.0);
    const GroupModel m = GroupModel::heisenberg(1);
    const AssembledOperator a = assemble(m, grid);
    const MapSample f = map_preset("identity", m, grid);
    const TensionField t = levi_tension_heisenberg(a, f);
    structural = structural && (static_cast<int>(t.values.size()) == 2 * t.m);
    maxima.push_back(max_trusted(t.norm_sq, t.trusted));
  }
  os << "    max trusted |H_b|^2 per level:";
  for (double v : maxima) os << " " << v;
  os << "\n    horizontal representation (2m components): "
     << (structural ? "yes" : "NO") << "\n";
  bool ok = structural;
  for (std::size_t l = 0; l + 1 < maxima.size(); ++l)
    ok = ok && (maxima[l + 1] <= maxima[l] / 3.0 || maxima[l + 1] <= 1e-12);
  return ok;
}

bool criterion_11(std::ostream& os) {
  bool ok = true;
  for (int n = 1; n <= 8; ++n) {
    ReillyQuantities q;
    q.volume = 1.0;
    q.energy = static_cast<double>(n);
    q.tension_integral = 4.0 * static_cast<double>(n) * n;
    const auto rep = reilly_check(0.0, n, q, ReillyMode::SemiIsometricForm, 1e-12);
    ok = ok && (rep.rows[0].rhs == 2.0 * n);
  }
  // grid-backed route through a synthetic constant field
  const GridDomain grid = h1_grid(0.125, 0.0625);
  const int n = 3;
  const TensionField t = constant_tension_field(grid, 4.0 * n * n);
  ReillyQuantities q;
  q.volume = integrate(grid, Vec::Ones(grid.size()));
  q.tension_integral = integrate(grid, t.norm_sq);
  q.energy = n * q.volume;
  const auto rep = reilly_check(0.0, n, q, ReillyMode::SemiIsometricForm, 1e-12);
  os << "    grid-backed bound for n=3: " << std::setprecision(17)
     << rep.rows[0].rhs << " (target 6)\n";
  ok = ok && std::abs(rep.rows[0].rhs - 6.0) <= 6.0 * 1e-14;
  return ok;
}

bool criterion_12(std::ostream& os) {
  const GroupModel m = GroupModel::carnot_step2(3, 3, levi_civita_c());
  std::vector<double> maxima;
  for (const double h : {1.0 / 6, 1.0 / 8}) {
    const GridDomain grid = build_grid(
        std::vector<std::array<double, 2>>(6, {0.0, 1.0}), std::vector<double>(6, h));
    const AssembledOperator a = assemble(m, grid);
    const MapSample f = map_preset("coordinates", m, grid);
    const TensionField t = levi_tension_euclidean(a, f);
    Vec norm = t.norm_sq.cwiseSqrt();
    maxima.push_back(max_trusted(norm, t.trusted));
  }
  os << "    max trusted |H_b| per level:";
  for (double v : maxima) os << " " << v;
  os << "\n";
  bool ok = true;
  for (std::size_t l = 0; l + 1 < maxima.size(); ++l)
    ok = ok && (maxima[l + 1] <= maxima[l] / 3.0 || maxima[l + 1] <= 1e-12);
  return ok;
}

bool criterion_13(std::ostream& os) {
  const fs::path dir =
      fs::temp_directory_path() / ("sublab_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  json job;
  job["model"] = {{"kind", "heisenberg"}, {"n", 1}};
  job["grid"] = {{"box", {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}},
                 {"h", {0.125, 0.125, 0.0625}}};
  job["solver"] = {{"k", 8}, {"tol", 1e-9}, {"seed", 12345}, {"vectors", true}};

  auto run_once = [&](const std::string& tag) {
    json j = job;
    j["output"] = {{"spectrum", (dir / (tag + ".json")).string()},
                   {"vectors", (dir / (tag + ".sbsp")).string()}};
    return run_solve(j) == kExitOk;
  };
  bool ok = run_once("a") && run_once("b");
  json pa = load_json_file(dir / "a.json").at("payload");
  json pb = load_json_file(dir / "b.json").at("payload");
  pa["vectors_file"] = pb["vectors_file"] = "";
  const bool payload_same = pa.dump() == pb.dump();
  std::ifstream fa(dir / "a.sbsp", std::ios::binary), fb(dir / "b.sbsp", std::ios::binary);
  const std::string ba((std::istreambuf_iterator<char>(fa)), {});
  const std::string bb((std::istreambuf_iterator<char>(fb)), {});
  const bool vectors_same = (ba == bb) && !ba.empty();
  os << "    payload bytes identical: " << (payload_same ? "yes" : "NO")
     << ", vector blocks identical: " << (vectors_same ? "yes" : "NO") << "\n";
  ok = ok && payload_same && vectors_same;

#ifdef SUBLAB_CLI_PATH
  // the same contract through the installed binary, plus the exit-code map
  const std::string cli = SUBLAB_CLI_PATH;
  json j = job;
  j["output"] = {{"spectrum", (dir / "cli.json").string()}};
  j["solver"]["vectors"] = false;
  write_json_file(dir / "job.json", j);
  const int rc_solve =
      std::system((cli + " solve " + (dir / "job.json").string() + " >/dev/null 2>&1").c_str());
  json jc;
  jc["spectrum"] = (dir / "cli.json").string();
  jc["checks"] = json::array(
      {{{"family", "yang"}, {"mode", "cr"}, {"dim", 1}, {"p", {2.0}},
        {"k_max", 6}, {"offsets", {{"mode", "zero"}}}, {"tol_rel", 1e-6}}});
  jc["output"] = {{"report", (dir / "rep.json").string()},
                  {"csv", (dir / "rep.csv").string()}};
  write_json_file(dir / "check.json", jc);
  const int rc_check =
      std::system((cli + " check " + (dir / "check.json").string() + " >/dev/null 2>&1").c_str());
  write_text_file(dir / "broken.json", "{\"model\": {\"kind\": \"unknown\"}}");
  const int rc_bad =
      std::system((cli + " solve " + (dir / "broken.json").string() + " >/dev/null 2>&1").c_str());
  const bool cli_ok = WEXITSTATUS(rc_solve) == 0 && WEXITSTATUS(rc_check) == 0 &&
                      WEXITSTATUS(rc_bad) == kExitConfigError;
  os << "    cli exit codes (solve/check/bad-config): " << WEXITSTATUS(rc_solve)
     << "/" << WEXITSTATUS(rc_check) << "/" << WEXITSTATUS(rc_bad) << "\n";
  ok = ok && cli_ok;
#endif
  std::error_code ec;
  fs::remove_all(dir, ec);
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "operator symmetry (exact) and positive semidefiniteness", criterion_1},
      {2, "planar square eigenvalue: second-order convergence to 2*pi^2", criterion_2},
      {3, "iterative and dense solvers agree to 1e-8 on all small grids", criterion_3},
      {4, "gap-power inequality on the box spectrum (p in {1,2,3}, k <= 10)", criterion_4},
      {5, "average and power bounds hold; implied bound dominates lambda_{k+1}", criterion_5},
      {6, "carnot-mode checks with d=2 reproduce the n=1 right-hand sides", criterion_6},
      {7, "constant potential shifts the spectrum exactly; shifted offsets pass", criterion_7},
      {8, "commutator inequality: 500 random pairs, zero failures", criterion_8},
      {9, "dilated projection: tension decays, semi-isometry residual small", criterion_9},
      {10, "identity map: tension decays, representation stays horizontal", criterion_10},
      {11, "round-sphere constants give the bound 2n exactly", criterion_11},
      {12, "free step-2 coordinates: tension decays under refinement", criterion_12},
      {13, "fixed seed gives byte-identical spectrum payloads", criterion_13},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::ostringstream detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail << "    exception: " << e.what() << "\n";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << std::setw(2) << c.id << " "
              << c.name << "  (" << std::fixed << std::setprecision(1) << secs
              << "s)\n" << std::defaultfloat << detail.str();
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) + " criteria failed\n");
  std::cout << "documented limitations (not reproducible at desk scale): "
               "sharpness of the shifted inequality at k=1 on the round "
               "sphere; equality cases of the first-eigenvalue bound "
               "(closed manifolds).\n";
  return failures;
}
