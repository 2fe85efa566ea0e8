// Command-line front end: single curvature computations, prescribed-Ricci
// solves, forward/ancient iteration traces and region scans, with CSV or
// JSON-lines output suitable for plotting.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ricci/ancient.hpp"
#include "ricci/einstein.hpp"
#include "ricci/geometry.hpp"
#include "ricci/iteration.hpp"
#include "ricci/prescribed.hpp"
#include "ricci/records.hpp"

namespace {

using namespace ricci;

struct GridSpec {
  double lo = 0.0, hi = 1.0;
  int count = 1;

  std::vector<double> points() const {
    std::vector<double> p;
    p.reserve(count);
    if (count == 1) {
      p.push_back(lo);
      return p;
    }
    for (int i = 0; i < count; ++i)
      p.push_back(lo + (hi - lo) * double(i) / double(count - 1));
    return p;
  }
};

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream is(s);
  if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' ||
      g.count < 1)
    throw CLI::ValidationError("--grid", "expected lo:hi:count with count >= 1");
  return g;
}

std::vector<double> parse_tuple(const std::string& s, std::size_t want,
                                const std::string& flag) {
  std::vector<double> v;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != want)
    throw CLI::ValidationError(flag, "expected " + std::to_string(want) +
                                         " comma-separated values");
  return v;
}

FibrationFamily parse_family(const std::string& name, int n) {
  if (name == "circle") return {Fibration::CircleFiberSphere, n};
  if (name == "sp1") return {Fibration::Sp1FiberSphere, n};
  if (name == "spin7") return {Fibration::Spin7FiberSphere, n};
  if (name == "cp1") return {Fibration::CP1FiberProjective, n};
  throw CLI::ValidationError("--family",
                             "expected one of circle, sp1, spin7, cp1");
}

struct Output {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty = stdout

  void emit(const std::vector<std::string>& schema,
            const std::vector<Record>& records) const {
    if (path.empty()) {
      emit_records(schema, records, format, std::cout);
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    emit_records(schema, records, format, os);
    if (!os) throw std::runtime_error("write failed: " + path);
  }
};

void add_output_flags(CLI::App* app, Output& out) {
  app->add_option("--format", [&out](const std::vector<std::string>& v) {
        if (v[0] == "csv") out.format = OutputFormat::Csv;
        else if (v[0] == "json-lines") out.format = OutputFormat::JsonLines;
        else return false;
        return true;
      },
      "output format: csv (default) or json-lines");
  app->add_option("--out", out.path, "output file (default: stdout)");
}

int run(int argc, char** argv) {
  CLI::App app{"homogeneous Ricci curvature toolkit"};
  app.require_subcommand(1);

  Output out;
  std::string family_name = "sp1";
  int n = 1;
  std::string xs, Ts;
  double t = 1.0, s = 1.0, b = 1.0, a = 1.0;
  double tol = 1e-10;
  int max_iter = 500, max_steps = 100;
  std::string grid_str;
  std::uint64_t seed = 1, samples = 1000;

  int exit_code = 0;
  std::vector<Record> records;
  std::vector<std::string> schema;

  // ricci ------------------------------------------------------------------
  auto* ricci_cmd = app.add_subcommand("ricci", "evaluate Ricci curvature");
  ricci_cmd->require_subcommand(1);

  auto* ricci_su2_cmd = ricci_cmd->add_subcommand("su2");
  ricci_su2_cmd->add_option("--x", xs, "metric entries x1,x2,x3")->required();
  add_output_flags(ricci_su2_cmd, out);
  ricci_su2_cmd->callback([&] {
    const auto x = parse_tuple(xs, 3, "--x");
    const DiagonalForm3 r = ricci_su2(Su2Metric{x[0], x[1], x[2]});
    schema = {"x1", "x2", "x3", "r1", "r2", "r3", "status"};
    records.push_back(Record{}
                          .add("x1", x[0]).add("x2", x[1]).add("x3", x[2])
                          .add("r1", r.r1).add("r2", r.r2).add("r3", r.r3)
                          .add("status", "ok"));
  });

  auto* ricci_ts_cmd = ricci_cmd->add_subcommand("two-summand");
  ricci_ts_cmd->add_option("--family", family_name);
  ricci_ts_cmd->add_option("--n", n);
  ricci_ts_cmd->add_option("--t", t)->required();
  ricci_ts_cmd->add_option("--s", s)->required();
  add_output_flags(ricci_ts_cmd, out);
  ricci_ts_cmd->callback([&] {
    const FibrationFamily fam = parse_family(family_name, n);
    const TwoSummandForm f = ricci_two_summand({fam, t, s});
    schema = {"family", "n", "t", "s", "A", "B", "status"};
    records.push_back(Record{}
                          .add("family", to_string(fam.kind)).add("n", fam.n)
                          .add("t", t).add("s", s)
                          .add("A", f.A).add("B", f.B).add("status", "ok"));
  });

  auto* ricci_fp_cmd = ricci_cmd->add_subcommand("four-param");
  ricci_fp_cmd->add_option("--n", n);
  ricci_fp_cmd->add_option("--x", xs, "fiber entries x1,x2,x3")->required();
  ricci_fp_cmd->add_option("--s", s);
  add_output_flags(ricci_fp_cmd, out);
  ricci_fp_cmd->callback([&] {
    const auto x = parse_tuple(xs, 3, "--x");
    const FourParamForm f = ricci_four_param({n, x[0], x[1], x[2], s});
    schema = {"n", "x1", "x2", "x3", "s", "a1", "a2", "a3", "b", "status"};
    records.push_back(Record{}
                          .add("n", n)
                          .add("x1", x[0]).add("x2", x[1]).add("x3", x[2])
                          .add("s", s)
                          .add("a1", f.a1).add("a2", f.a2).add("a3", f.a3)
                          .add("b", f.b).add("status", "ok"));
  });

  // solve ------------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "prescribed Ricci curvature");
  solve_cmd->require_subcommand(1);

  auto* solve_su2_cmd = solve_cmd->add_subcommand("su2");
  solve_su2_cmd->add_option("--T", Ts, "target T1,T2,T3")->required();
  solve_su2_cmd->add_option("--tol", tol);
  add_output_flags(solve_su2_cmd, out);
  solve_su2_cmd->callback([&] {
    const auto T = parse_tuple(Ts, 3, "--T");
    schema = {"T1", "T2", "T3", "x1", "x2", "x3", "kappa", "residual",
              "iterations", "status"};
    try {
      const Su2Solve r = solve_su2({T[0], T[1], T[2]});
      records.push_back(Record{}
                            .add("T1", T[0]).add("T2", T[1]).add("T3", T[2])
                            .add("x1", r.g.x1).add("x2", r.g.x2).add("x3", r.g.x3)
                            .add("kappa", r.c).add("residual", r.residual)
                            .add("iterations", r.iterations).add("status", "ok"));
    } catch (const SolveError& e) {
      records.push_back(Record{}
                            .add("T1", T[0]).add("T2", T[1]).add("T3", T[2])
                            .add("x1", 0.0).add("x2", 0.0).add("x3", 0.0)
                            .add("kappa", 0.0).add("residual", 0.0)
                            .add("iterations", 0).add("status", e.what()));
      exit_code = 1;
    }
  });

  auto* solve_ts_cmd = solve_cmd->add_subcommand("two-summand");
  solve_ts_cmd->add_option("--family", family_name);
  solve_ts_cmd->add_option("--n", n);
  solve_ts_cmd->add_option("--a", a, "vertical target coefficient")->required();
  solve_ts_cmd->add_option("--b", b, "horizontal target coefficient");
  add_output_flags(solve_ts_cmd, out);
  solve_ts_cmd->callback([&] {
    const FibrationFamily fam = parse_family(family_name, n);
    schema = {"family", "n", "a", "b", "r", "kappa", "residual", "status"};
    const auto r = solve_two_summand(fam, a, b);
    if (r) {
      records.push_back(Record{}
                            .add("family", to_string(fam.kind)).add("n", fam.n)
                            .add("a", a).add("b", b)
                            .add("r", r->g.ratio()).add("kappa", r->kappa)
                            .add("residual", r->residual).add("status", "ok"));
    } else {
      records.push_back(Record{}
                            .add("family", to_string(fam.kind)).add("n", fam.n)
                            .add("a", a).add("b", b)
                            .add("r", 0.0).add("kappa", 0.0)
                            .add("residual", 0.0).add("status", "unsolvable"));
    }
  });

  auto* solve_fp_cmd = solve_cmd->add_subcommand("four-param");
  solve_fp_cmd->add_option("--n", n);
  solve_fp_cmd->add_option("--T", Ts, "fiber target T1,T2,T3")->required();
  solve_fp_cmd->add_option("--b", b, "horizontal target coefficient");
  add_output_flags(solve_fp_cmd, out);
  solve_fp_cmd->callback([&] {
    const auto T = parse_tuple(Ts, 3, "--T");
    schema = {"n", "T1", "T2", "T3", "b", "x1", "x2", "x3", "kappa",
              "residual", "iterations", "status"};
    Record rec;
    rec.add("n", n).add("T1", T[0]).add("T2", T[1]).add("T3", T[2]).add("b", b);
    try {
      const FourParamSolve r =
          solve_four_param_homotopy(n, {n, T[0], T[1], T[2], b});
      rec.add("x1", r.g.x1).add("x2", r.g.x2).add("x3", r.g.x3)
          .add("kappa", r.kappa).add("residual", r.residual)
          .add("iterations", r.iterations).add("status", "ok");
    } catch (const SolveError& e) {
      rec.add("x1", 0.0).add("x2", 0.0).add("x3", 0.0)
          .add("kappa", 0.0).add("residual", 0.0)
          .add("iterations", 0).add("status", e.what());
      exit_code = 1;
    }
    records.push_back(std::move(rec));
  });

  // c-function -------------------------------------------------------------
  auto* cfun_cmd = app.add_subcommand("c-function", "the constant c(T1,T2,T3)");
  cfun_cmd->add_option("--T", Ts, "target T1,T2,T3")->required();
  add_output_flags(cfun_cmd, out);
  cfun_cmd->callback([&] {
    const auto T = parse_tuple(Ts, 3, "--T");
    schema = {"T1", "T2", "T3", "c", "Z", "branch", "status"};
    const CFunctionResult r = c_function(T[0], T[1], T[2]);
    records.push_back(
        Record{}
            .add("T1", T[0]).add("T2", T[1]).add("T3", T[2])
            .add("c", r.c).add("Z", r.Z)
            .add("branch", r.branch == CBranch::GenericCubic
                               ? "GenericCubic" : "DegenerateClosedForm")
            .add("status", "ok"));
  });

  // iterate ----------------------------------------------------------------
  auto* it_cmd = app.add_subcommand("iterate", "forward Ricci iteration");
  it_cmd->require_subcommand(1);

  auto* it_su2_cmd = it_cmd->add_subcommand("su2");
  it_su2_cmd->add_option("--x", xs, "start x1,x2,x3")->required();
  it_su2_cmd->add_option("--tol", tol);
  it_su2_cmd->add_option("--max-iter", max_iter);
  add_output_flags(it_su2_cmd, out);
  it_su2_cmd->callback([&] {
    const auto x = parse_tuple(xs, 3, "--x");
    const auto tr = iterate_su2({x[0], x[1], x[2]}, {tol, max_iter});
    schema = {"step", "x1", "x2", "x3", "c", "status"};
    for (std::size_t i = 0; i < tr.metrics.size(); ++i) {
      records.push_back(Record{}
                            .add("step", std::int64_t(i))
                            .add("x1", tr.metrics[i].x1)
                            .add("x2", tr.metrics[i].x2)
                            .add("x3", tr.metrics[i].x3)
                            .add("c", i == 0 ? 1.0 : tr.constants[i - 1])
                            .add("status", to_string(tr.status)));
    }
    if (tr.status == IterationStatus::SolveFailed) exit_code = 1;
  });

  auto* it_ts_cmd = it_cmd->add_subcommand("two-summand");
  it_ts_cmd->add_option("--family", family_name);
  it_ts_cmd->add_option("--n", n);
  it_ts_cmd->add_option("--t", t)->required();
  it_ts_cmd->add_option("--s", s);
  it_ts_cmd->add_option("--tol", tol);
  it_ts_cmd->add_option("--max-iter", max_iter);
  add_output_flags(it_ts_cmd, out);
  it_ts_cmd->callback([&] {
    const FibrationFamily fam = parse_family(family_name, n);
    const auto tr = iterate_two_summand(fam, {fam, t, s}, {tol, max_iter});
    schema = {"step", "r", "kappa", "status"};
    for (std::size_t i = 0; i < tr.ratios.size(); ++i) {
      records.push_back(Record{}
                            .add("step", std::int64_t(i))
                            .add("r", tr.ratios[i])
                            .add("kappa", i == 0 ? 1.0 : tr.constants[i - 1])
                            .add("status", to_string(tr.status)));
    }
  });

  auto* it_fp_cmd = it_cmd->add_subcommand("four-param");
  it_fp_cmd->add_option("--n", n);
  it_fp_cmd->add_option("--x", xs, "start fiber x1,x2,x3")->required();
  it_fp_cmd->add_option("--s", s);
  it_fp_cmd->add_option("--tol", tol);
  it_fp_cmd->add_option("--max-iter", max_iter);
  add_output_flags(it_fp_cmd, out);
  it_fp_cmd->callback([&] {
    const auto x = parse_tuple(xs, 3, "--x");
    const FMapConfig cfg(n);
    const auto tr =
        iterate_four_param_near_round(cfg, {n, x[0], x[1], x[2], s}, {tol, max_iter});
    schema = {"step", "x1", "x2", "x3", "c", "status"};
    for (std::size_t i = 0; i < tr.metrics.size(); ++i) {
      records.push_back(Record{}
                            .add("step", std::int64_t(i))
                            .add("x1", tr.metrics[i].x1)
                            .add("x2", tr.metrics[i].x2)
                            .add("x3", tr.metrics[i].x3)
                            .add("c", i == 0 ? 1.0 : tr.constants[i - 1])
                            .add("status", to_string(tr.status)));
    }
    if (tr.status == IterationStatus::SolveFailed) exit_code = 1;
  });

  // ancient ----------------------------------------------------------------
  auto* an_cmd = app.add_subcommand("ancient", "backward Ricci iteration");
  an_cmd->require_subcommand(1);

  auto* an_su2_cmd = an_cmd->add_subcommand("su2");
  an_su2_cmd->add_option("--x", xs, "start x1,x2,x3")->required();
  an_su2_cmd->add_option("--max-steps", max_steps);
  add_output_flags(an_su2_cmd, out);
  an_su2_cmd->callback([&] {
    const auto x = parse_tuple(xs, 3, "--x");
    AncientOptions opt;
    opt.max_steps = max_steps;
    const auto tr = ancient_iterate_su2({x[0], x[1], x[2]}, opt);
    const Su2Metric& last = tr.metrics.back();
    schema = {"x1", "x2", "x3", "steps_survived", "status",
              "last_x1", "last_x2", "last_x3", "admits_ancient"};
    records.push_back(Record{}
                          .add("x1", x[0]).add("x2", x[1]).add("x3", x[2])
                          .add("steps_survived", tr.steps_survived)
                          .add("status", to_string(tr.status))
                          .add("last_x1", last.x1).add("last_x2", last.x2)
                          .add("last_x3", last.x3)
                          .add("admits_ancient",
                               classify_ancient_su2({x[0], x[1], x[2]})));
  });

  auto* an_ts_cmd = an_cmd->add_subcommand("two-summand");
  an_ts_cmd->add_option("--family", family_name);
  an_ts_cmd->add_option("--n", n);
  an_ts_cmd->add_option("--t", t)->required();
  an_ts_cmd->add_option("--s", s);
  an_ts_cmd->add_option("--max-steps", max_steps);
  add_output_flags(an_ts_cmd, out);
  an_ts_cmd->callback([&] {
    const FibrationFamily fam = parse_family(family_name, n);
    AncientOptions opt;
    opt.max_steps = max_steps;
    const auto tr = ancient_iterate_two_summand({fam, t, s}, opt);
    schema = {"family", "n", "t", "s", "steps_survived", "status", "last_r"};
    records.push_back(Record{}
                          .add("family", to_string(fam.kind)).add("n", fam.n)
                          .add("t", t).add("s", s)
                          .add("steps_survived", tr.steps_survived)
                          .add("status", to_string(tr.status))
                          .add("last_r", tr.ratios.back()));
  });

  auto* an_fp_cmd = an_cmd->add_subcommand("four-param");
  an_fp_cmd->add_option("--n", n);
  an_fp_cmd->add_option("--x", xs, "start fiber x1,x2,x3")->required();
  an_fp_cmd->add_option("--s", s);
  an_fp_cmd->add_option("--max-steps", max_steps);
  add_output_flags(an_fp_cmd, out);
  an_fp_cmd->callback([&] {
    const auto x = parse_tuple(xs, 3, "--x");
    AncientOptions opt;
    opt.max_steps = max_steps;
    const auto tr = ancient_iterate_four_param({n, x[0], x[1], x[2], s}, opt);
    schema = {"n", "x1", "x2", "x3", "s", "steps_survived", "status",
              "necessary_condition_held"};
    records.push_back(Record{}
                          .add("n", n)
                          .add("x1", x[0]).add("x2", x[1]).add("x3", x[2])
                          .add("s", s)
                          .add("steps_survived", tr.steps_survived)
                          .add("status", to_string(tr.status))
                          .add("necessary_condition_held",
                               tr.necessary_condition_held));
  });

  // einstein ---------------------------------------------------------------
  auto* ein_cmd = app.add_subcommand("einstein", "Einstein metric catalog");
  ein_cmd->add_option("--family", family_name);
  ein_cmd->add_option("--n", n);
  add_output_flags(ein_cmd, out);
  ein_cmd->callback([&] {
    const FibrationFamily fam = parse_family(family_name, n);
    schema = {"family", "n", "ratio", "lambda", "verified"};
    for (const EinsteinEntry& e : einstein_list(fam)) {
      const bool ok =
          is_einstein(TwoSummandMetric{fam, e.ratio, 1.0}, 1e-12).has_value();
      records.push_back(Record{}
                            .add("family", to_string(fam.kind)).add("n", fam.n)
                            .add("ratio", e.ratio)
                            .add("lambda", e.einstein_constant)
                            .add("verified", ok));
    }
  });

  // scan -------------------------------------------------------------------
  auto* scan_cmd = app.add_subcommand("scan", "parameter region scans");
  scan_cmd->require_subcommand(1);

  auto* scan_solv_cmd = scan_cmd->add_subcommand(
      "solvability", "two-summand solvability across an a/b sweep");
  scan_solv_cmd->add_option("--family", family_name);
  scan_solv_cmd->add_option("--n", n);
  scan_solv_cmd->add_option("--grid", grid_str, "a/b grid lo:hi:count")->required();
  add_output_flags(scan_solv_cmd, out);
  scan_solv_cmd->callback([&] {
    const FibrationFamily fam = parse_family(family_name, n);
    const GridSpec grid = parse_grid(grid_str);
    schema = {"index", "a", "b", "solvable", "r", "kappa"};
    std::int64_t idx = 0;
    for (double ratio : grid.points()) {
      const auto r = solve_two_summand(fam, ratio, 1.0);
      records.push_back(Record{}
                            .add("index", idx++)
                            .add("a", ratio).add("b", 1.0)
                            .add("solvable", r.has_value())
                            .add("r", r ? r->g.ratio() : 0.0)
                            .add("kappa", r ? r->kappa : 0.0));
    }
  });

  auto* scan_fp_cmd = scan_cmd->add_subcommand(
      "four-param-solvability",
      "random four-parameter targets: sufficient conditions vs. homotopy");
  scan_fp_cmd->add_option("--n", n);
  scan_fp_cmd->add_option("--samples", samples);
  scan_fp_cmd->add_option("--seed", seed);
  add_output_flags(scan_fp_cmd, out);
  scan_fp_cmd->callback([&] {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.05, 3.0);
    schema = {"index", "T1", "T2", "T3", "b", "theorem_b", "c_condition",
              "c", "solved", "kappa"};
    for (std::uint64_t i = 0; i < samples; ++i) {
      const FourParamForm T{n, dist(rng), dist(rng), dist(rng), 1.0};
      const auto pred = solvability_predicates(n, T);
      const double c = c_function(T.a1, T.a2, T.a3).c;
      bool solved = false;
      double kappa = 0.0;
      try {
        const auto r = solve_four_param_homotopy(n, T);
        solved = true;
        kappa = r.kappa;
      } catch (const SolveError&) {
      }
      records.push_back(Record{}
                            .add("index", std::int64_t(i))
                            .add("T1", T.a1).add("T2", T.a2).add("T3", T.a3)
                            .add("b", T.b)
                            .add("theorem_b", pred.theorem_b)
                            .add("c_condition", pred.c_condition)
                            .add("c", c).add("solved", solved)
                            .add("kappa", kappa));
    }
  });

  auto* scan_an_cmd = scan_cmd->add_subcommand("ancient", "ancient-iteration lifetimes");
  scan_an_cmd->add_option("--family", family_name,
                          "su2 (Berger nu grid) or a two-summand family (t/s grid)");
  scan_an_cmd->add_option("--n", n);
  scan_an_cmd->add_option("--grid", grid_str)->required();
  scan_an_cmd->add_option("--max-steps", max_steps);
  add_output_flags(scan_an_cmd, out);
  scan_an_cmd->callback([&] {
    const GridSpec grid = parse_grid(grid_str);
    AncientOptions opt;
    opt.max_steps = max_steps;
    schema = {"index", "param", "steps_survived", "status", "survived"};
    std::vector<AncientScanPoint> pts;
    if (family_name == "su2")
      pts = ancient_region_scan_su2_berger(grid.points(), opt);
    else
      pts = ancient_region_scan_two_summand(parse_family(family_name, n),
                                            grid.points(), opt);
    std::int64_t idx = 0;
    for (const auto& p : pts) {
      records.push_back(Record{}
                            .add("index", idx++)
                            .add("param", p.point[0])
                            .add("steps_survived", p.steps_survived)
                            .add("status", to_string(p.status))
                            .add("survived", ancient_survived(p.status)));
    }
  });

  auto* scan_uni_cmd = scan_cmd->add_subcommand(
      "uniqueness", "random scan for fiber-symmetry counterexamples");
  scan_uni_cmd->add_option("--n", n);
  scan_uni_cmd->add_option("--samples", samples);
  scan_uni_cmd->add_option("--seed", seed);
  double tol_a = 1e-9, tol_x = 1e-6;
  scan_uni_cmd->add_option("--tol-a", tol_a);
  scan_uni_cmd->add_option("--tol-x", tol_x);
  add_output_flags(scan_uni_cmd, out);
  scan_uni_cmd->callback([&] {
    UniquenessScanOptions opt;
    opt.a_spread_tol = tol_a;
    opt.x_spread_tol = tol_x;
    opt.seed = seed;
    const auto rep = sp1_uniqueness_scan(n, samples, opt);
    schema = {"n", "samples", "seed", "flags", "max_identity_defect"};
    records.push_back(Record{}
                          .add("n", n)
                          .add("samples", std::int64_t(rep.samples))
                          .add("seed", std::int64_t(seed))
                          .add("flags", std::int64_t(rep.flags))
                          .add("max_identity_defect", rep.max_identity_defect));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  out.emit(schema, records);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
