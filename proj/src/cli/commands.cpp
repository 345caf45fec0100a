#include "cli/commands.hpp"

#include "cartan/abnormal.hpp"
#include "cartan/attainable.hpp"
#include "cartan/bangbang.hpp"
#include "cartan/cartan_core.hpp"
#include "cartan/extremal.hpp"
#include "cartan/singular.hpp"
#include "cartan/verification.hpp"
#include "cli/output.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace cartan::cli {

namespace {

Covector covector_from(const std::vector<double>& v, const char* what) {
  if (v.empty()) return Covector();
  if (v.size() != 5) throw std::invalid_argument(std::string(what) + " needs 5 comma-separated values");
  return {v[0], v[1], v[2], v[3], v[4]};
}

Point point_from(const std::vector<double>& v, const char* what) {
  if (v.empty()) return Point::origin();
  if (v.size() != 5) throw std::invalid_argument(std::string(what) + " needs 5 comma-separated values");
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// "u1:u2:duration,u1:u2:duration,..."
PiecewiseControl parse_controls(const std::string& spec) {
  std::vector<ControlSegment> segs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double u1 = 0.0;
    double u2 = 0.0;
    double d = 0.0;
    char c1 = 0;
    char c2 = 0;
    std::stringstream is(item);
    if (!(is >> u1 >> c1 >> u2 >> c2 >> d) || c1 != ':' || c2 != ':') {
      throw std::invalid_argument("malformed control piece '" + item + "' (expected u1:u2:duration)");
    }
    segs.push_back({{u1, u2}, d});
  }
  if (segs.empty()) throw std::invalid_argument("--controls is empty");
  return PiecewiseControl(std::move(segs));
}

// ---------------------------------------------------------------------------

const std::vector<std::string> kTrajectoryColumns = {"t",  "x",  "y",  "z",  "v",  "w",      "h1", "h2",
                                                     "h3", "h4", "h5", "u1", "u2", "branch", "E"};

std::vector<double> trajectory_row(double t, const ExtremalState& s, const Control& u, int branch) {
  const Vec5& q = s.q.coords();
  const Vec5& h = s.h.components();
  return {t, q(0), q(1), q(2), q(3), q(4), h(0), h(1), h(2), h(3), h(4), u.u1, u.u2, double(branch), energy(s.h)};
}

struct Block {
  int branch = 0;
  std::vector<std::vector<double>> rows;
  std::vector<double> switch_times;
  std::vector<double> corner_times;
  bool inferred = false;
};

std::vector<Block> bang_blocks(const TrajectoryConfig& cfg, std::ostream& log) {
  const ExpResult r = exp_bangbang(covector_from(cfg.h0, "--h0"), point_from(cfg.q0, "--q0"), cfg.T);
  std::vector<Block> blocks;
  for (std::size_t b = 0; b < r.branches.size(); ++b) {
    const BangBranch& br = r.branches[b];
    Block blk;
    blk.branch = static_cast<int>(b);
    blk.switch_times = br.switch_times;
    blk.corner_times = br.corner_times;
    blk.inferred = br.inferred_continuation;
    const long n = std::max(1L, static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)));
    std::size_t seg = 0;
    for (long k = 0; k <= n; k += std::max(1, cfg.stride)) {
      const double t = std::min(cfg.T, cfg.T * k / n);
      while (seg + 1 < br.segments.size() && t > br.segments[seg].t1) ++seg;
      const auto& s = br.segments[seg];
      blk.rows.push_back(trajectory_row(t, evaluate_segment(s.coeffs, t - s.t0), s.u, blk.branch));
      if (k + std::max(1, cfg.stride) > n && k != n) {
        const auto& last = br.segments.back();
        blk.rows.push_back(trajectory_row(cfg.T, br.endpoint, last.u, blk.branch));
      }
    }
    for (double t : br.switch_times) log << "switch branch=" << b << " t=" << format_number(t) << '\n';
    for (double t : br.corner_times) log << "corner branch=" << b << " t=" << format_number(t) << '\n';
    if (br.inferred_continuation) log << "branch " << b << ": corner continuation inferred from theta-continuity\n";
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

std::vector<Block> integrated_blocks(const TrajectoryConfig& cfg, std::ostream& log) {
  const ExtremalState s0{covector_from(cfg.h0, "--h0"), point_from(cfg.q0, "--q0")};
  IntegrateOptions io;
  io.dt = cfg.dt;
  io.record_stride = cfg.stride;
  Trajectory traj;
  if (cfg.mode == "feedback") {
    traj = integrate(s0, FeedbackLaw{}, cfg.T, io);
  } else {
    traj = integrate(s0, parse_controls(cfg.controls), cfg.T, io);
  }
  Block blk;
  blk.switch_times = traj.switch_times;
  for (const auto& s : traj.samples) blk.rows.push_back(trajectory_row(s.t, s.state, s.u, 0));
  for (double t : traj.switch_times) log << "switch branch=0 t=" << format_number(t) << '\n';
  return {blk};
}

std::vector<Block> abnormal_blocks(const TrajectoryConfig& cfg) {
  if (cfg.u.size() != 2) throw std::invalid_argument("--u needs 2 comma-separated values");
  const Control u{cfg.u[0], cfg.u[1]};
  Block blk;
  const long n = std::max(1L, static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  for (long k = 0; k <= n; k += std::max(1, cfg.stride)) {
    const double t = cfg.T * k / n;
    blk.rows.push_back(trajectory_row(t, {Covector(), abnormal_point(u, t)}, u, 0));
  }
  if (blk.rows.back()[0] != cfg.T) blk.rows.push_back(trajectory_row(cfg.T, {Covector(), abnormal_point(u, cfg.T)}, u, 0));
  return {blk};
}

Json to_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

int cmd_trajectory(const TrajectoryConfig& cfg, std::ostream& log) {
  if (!(cfg.T > 0.0)) throw std::invalid_argument("--T must be positive");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("--dt must be positive");
  const Format format = parse_format(cfg.output.format);
  std::vector<Block> blocks;
  if (cfg.mode == "bang") {
    blocks = bang_blocks(cfg, log);
  } else if (cfg.mode == "feedback" || cfg.mode == "piecewise") {
    blocks = integrated_blocks(cfg, log);
  } else if (cfg.mode == "abnormal") {
    blocks = abnormal_blocks(cfg);
  } else {
    throw std::invalid_argument("unknown mode '" + cfg.mode + "'");
  }
  for (const auto& b : blocks) {
    for (const auto& r : b.rows) {
      if (std::max(std::abs(r[11]), std::abs(r[12])) > 1.0 + 1e-12) throw std::logic_error("inadmissible control row");
    }
  }

  OutputTarget target(cfg.output.out, format == Format::Csv ? "trajectory.csv" : "trajectory.json");
  if (format == Format::Csv) {
    CsvWriter w(target.stream(), kTrajectoryColumns);
    for (const auto& b : blocks) {
      for (const auto& r : b.rows) w.row(r);
    }
  } else {
    Json j;
    j["mode"] = cfg.mode;
    j["T"] = cfg.T;
    j["columns"] = kTrajectoryColumns;
    j["branches"] = Json::array();
    for (const auto& b : blocks) {
      Json jb;
      jb["branch"] = b.branch;
      jb["switch_times"] = to_json(b.switch_times);
      jb["corner_times"] = to_json(b.corner_times);
      jb["inferred_continuation"] = b.inferred;
      jb["rows"] = Json::array();
      for (const auto& r : b.rows) jb["rows"].push_back(to_json(r));
      j["branches"].push_back(std::move(jb));
    }
    write_json(target.stream(), j);
  }
  log << blocks.size() << " branch(es) written to " << target.description() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> default_levels(const std::vector<double>& crit) {
  std::vector<double> out;
  for (std::size_t k = 0; k < crit.size(); ++k) {
    out.push_back(crit[k]);
    if (k + 1 < crit.size()) out.push_back(0.5 * (crit[k] + crit[k + 1]));
  }
  out.push_back(crit.back() + std::max(1.0, crit.back() - crit.front()));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Curve {
  double level;
  std::string label;
  std::vector<Eigen::Vector2d> points;
  std::string note;
};

// Level set of the reduced first integral over hf1 in [-L, L].
std::vector<Eigen::Vector2d> reduced_level(double hf4, double hf5, double I, int n) {
  const double L = 3.0;
  std::vector<Eigen::Vector2d> upper;
  std::vector<Eigen::Vector2d> lower;
  for (int k = 0; k <= n; ++k) {
    const double hf1 = -L + 2.0 * L * k / n;
    const double r = I - hf5 * hf1 - hf4 * std::abs(hf1);
    if (r < 0.0) continue;
    const double hf3 = std::sqrt(2.0 * r);
    upper.emplace_back(hf1, hf3);
    if (hf3 > 0.0) lower.emplace_back(hf1, -hf3);
  }
  upper.insert(upper.end(), lower.rbegin(), lower.rend());
  return upper;
}

}  // namespace

int cmd_phase(const PhaseConfig& cfg, std::ostream& log) {
  if (cfg.samples < 2) throw std::invalid_argument("--samples must be at least 2");
  const Format format = parse_format(cfg.output.format);
  std::vector<Curve> curves;
  Json header;
  std::vector<std::string> columns;
  if (cfg.kind == "bang") {
    const Covector g = to_fundamental_domain(Covector(0, 0, 0, cfg.h4, cfg.h5)).first;
    const int c = domain_case(g.h4(), g.h5());
    const std::vector<double> crit = critical_energies(c, g.h4(), g.h5());
    header["kind"] = "bang";
    header["h4"] = cfg.h4;
    header["h5"] = cfg.h5;
    header["case"] = c;
    header["critical_energies"] = to_json(crit);
    columns = {"theta", "h3", "E", "stratum"};
    for (double E : cfg.levels.empty() ? default_levels(crit) : cfg.levels) {
      Curve cv{E, "", {}, ""};
      try {
        const StratumLabel s = stratum_of_level(cfg.h4, cfg.h5, E);
        cv.label = "C" + std::to_string(s.stratum);
        cv.points = level_curve(cfg.h4, cfg.h5, E, cfg.samples);
        if (c == 4 && std::abs(E) <= 1e-12) cv.note = "fixed points";
      } catch (const std::domain_error& e) {
        cv.note = e.what();
        log << "level E=" << format_number(E) << ": " << e.what() << '\n';
      }
      curves.push_back(std::move(cv));
    }
  } else if (cfg.kind == "singular") {
    const NormalizedAdjoint n{0.0, 0.0, cfg.hf4, cfg.hf5};
    const RegionLabel region = classify_adjoint_region(n);
    header["kind"] = "singular";
    header["hf4"] = cfg.hf4;
    header["hf5"] = cfg.hf5;
    header["region"] = to_string(region);
    columns = {"hf1", "hf3", "I", "region"};
    const std::vector<double> levels = cfg.levels.empty() ? std::vector<double>{-2, -1, -0.5, 0, 0.5, 1, 2} : cfg.levels;
    for (double I : levels) {
      Curve cv{I, to_string(region), reduced_level(cfg.hf4, cfg.hf5, I, cfg.samples), ""};
      if (cv.points.empty()) {
        cv.note = "empty level set on the sampled window";
        log << "level I=" << format_number(I) << ": " << cv.note << '\n';
      }
      curves.push_back(std::move(cv));
    }
  } else {
    throw std::invalid_argument("unknown phase kind '" + cfg.kind + "' (expected bang or singular)");
  }

  OutputTarget target(cfg.output.out, format == Format::Csv ? "phase.csv" : "phase.json");
  if (format == Format::Csv) {
    CsvWriter w(target.stream(), columns);
    for (const auto& cv : curves) {
      for (const auto& p : cv.points) w.row({p(0), p(1), cv.level}, {cv.label});
    }
  } else {
    Json j = header;
    j["curves"] = Json::array();
    for (const auto& cv : curves) {
      Json jc;
      jc["level"] = cv.level;
      jc["label"] = cv.label;
      jc["empty"] = cv.points.empty();
      if (!cv.note.empty()) jc["note"] = cv.note;
      jc["points"] = Json::array();
      for (const auto& p : cv.points) jc["points"].push_back({p(0), p(1)});
      j["curves"].push_back(std::move(jc));
    }
    write_json(target.stream(), j);
  }
  log << curves.size() << " level curve(s) written to " << target.description() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_attainable(const AttainableConfig& cfg, std::ostream& log) {
  if (!(cfg.T > 0.0)) throw std::invalid_argument("--T must be positive");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  const Format format = parse_format(cfg.output.format);
  if (!cfg.point.empty()) {
    const Membership m = membership(point_from(cfg.point, "--point"), cfg.T, cfg.tol);
    OutputTarget target(cfg.output.out, format == Format::Csv ? "membership.csv" : "membership.json");
    const Vec5& c = m.chart.coords();
    if (format == Format::Csv) {
      CsvWriter w(target.stream(), {"x1", "y1", "z1", "v1", "w1", "margin", "verdict", "binding"});
      w.row({c(0), c(1), c(2), c(3), c(4), m.margin},
            {m.inside ? "inside" : "outside", std::string(to_string(m.binding))});
    } else {
      Json j;
      j["verdict"] = m.inside ? "inside" : "outside";
      j["binding"] = std::string(to_string(m.binding));
      j["margin"] = m.margin;
      j["chart"] = {c(0), c(1), c(2), c(3), c(4)};
      j["T"] = cfg.T;
      j["tol"] = cfg.tol;
      write_json(target.stream(), j);
    }
    log << (m.inside ? "inside" : "outside") << " (binding " << to_string(m.binding) << ", margin "
        << format_number(m.margin) << ")\n";
    return 0;
  }
  if (cfg.section.empty()) throw std::invalid_argument("attainable needs --point or --section");
  if (cfg.section != "xz" && cfg.section != "xw" && cfg.section != "zw" && cfg.section != "full") {
    throw std::invalid_argument("unknown section '" + cfg.section + "' (expected xz, xw, zw or full)");
  }
  if (cfg.max_rows < 1) throw std::invalid_argument("--max-rows must be positive");
  const double slice = cfg.T / cfg.grid;
  auto keep = [&](const Point& q) { return cfg.section != "zw" || std::abs(q.x() - cfg.x_slice * cfg.T) <= slice; };

  long total = 0;
  brute_force_section(cfg.T, cfg.grid, [&](const Point& q, SectionFamily) { total += keep(q); }, cfg.jobs);
  const long thin = std::max(1L, (total + cfg.max_rows - 1) / cfg.max_rows);

  OutputTarget target(cfg.output.out, format == Format::Csv ? "section.csv" : "section.json");
  long index = 0;
  long written = 0;
  if (format == Format::Csv) {
    CsvWriter w(target.stream(), {"x1", "y1", "z1", "v1", "w1", "label"});
    brute_force_section(
        cfg.T, cfg.grid,
        [&](const Point& q, SectionFamily f) {
          if (!keep(q) || index++ % thin != 0) return;
          const Vec5& c = q.coords();
          w.row({c(0), c(1), c(2), c(3), c(4)}, {std::string(to_string(f))});
          ++written;
        },
        cfg.jobs);
  } else {
    Json j;
    j["section"] = cfg.section;
    j["T"] = cfg.T;
    j["grid"] = cfg.grid;
    j["sampled"] = total;
    j["thinning"] = thin;
    j["columns"] = {"x1", "y1", "z1", "v1", "w1", "label"};
    j["rows"] = Json::array();
    brute_force_section(
        cfg.T, cfg.grid,
        [&](const Point& q, SectionFamily f) {
          if (!keep(q) || index++ % thin != 0) return;
          const Vec5& c = q.coords();
          j["rows"].push_back({c(0), c(1), c(2), c(3), c(4), std::string(to_string(f))});
          ++written;
        },
        cfg.jobs);
    write_json(target.stream(), j);
  }
  log << written << " of " << total << " sampled endpoints written to " << target.description() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_verify(const VerifyConfig& cfg, std::ostream& log) {
  const Format format = parse_format(cfg.output.format);
  const std::vector<std::string> names = cfg.suites.empty() ? suite_names() : cfg.suites;
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.jobs = std::max(1, cfg.jobs);
  opt.section_grid = cfg.grid;
  std::vector<SuiteReport> reports;
  bool all = true;
  for (const auto& name : names) {
    reports.push_back(run_suite(name, opt));
    const auto& r = reports.back();
    all = all && r.pass();
    log << (r.pass() ? "PASS " : "FAIL ") << name << " (" << format_number(std::round(r.seconds * 1000) / 1000)
        << " s)\n";
  }

  OutputTarget target(cfg.output.out, format == Format::Csv ? "verify.csv" : "verify.json");
  if (format == Format::Csv) {
    CsvWriter w(target.stream(), {"measured", "threshold", "suite", "check", "pass", "detail"});
    for (const auto& r : reports) {
      for (const auto& c : r.checks) {
        w.row({c.measured, c.threshold}, {r.suite, csv_text(c.name), c.pass ? "pass" : "fail", csv_text(c.detail)});
      }
    }
  } else {
    Json j;
    j["seed"] = cfg.seed;
    j["pass"] = all;
    j["suites"] = Json::array();
    for (const auto& r : reports) {
      Json js;
      js["suite"] = r.suite;
      js["pass"] = r.pass();
      js["checks"] = Json::array();
      for (const auto& c : r.checks) {
        js["checks"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"threshold", c.threshold}, {"detail", c.detail}});
      }
      j["suites"].push_back(std::move(js));
    }
    write_json(target.stream(), j);
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv) {
  CLI::App app{"Time-optimal control on the Cartan group with the l-infinity sub-Finsler norm"};
  app.require_subcommand(1);

  auto add_output = [](CLI::App* sub, OutputConfig& o) {
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out,-o", o.out, "output file; default $CARTAN_OUTPUT_DIR/<name> or stdout");
  };

  TrajectoryConfig tc;
  auto* traj = app.add_subcommand("trajectory", "integrate an extremal or a given control");
  traj->add_option("--mode", tc.mode, "bang | feedback | piecewise | abnormal")
      ->check(CLI::IsMember({"bang", "feedback", "piecewise", "abnormal"}));
  traj->add_option("--h0", tc.h0, "initial covector h1,h2,h3,h4,h5")->delimiter(',');
  traj->add_option("--q0", tc.q0, "initial point x,y,z,v,w")->delimiter(',');
  traj->add_option("--u", tc.u, "constant control u1,u2 (abnormal mode)")->delimiter(',');
  traj->add_option("--controls", tc.controls, "u1:u2:duration,... (piecewise mode)");
  traj->add_option("--T", tc.T, "horizon");
  traj->add_option("--dt", tc.dt, "sampling / integration step");
  traj->add_option("--stride", tc.stride, "keep every n-th regular sample");
  add_output(traj, tc.output);

  PhaseConfig pc;
  auto* phase = app.add_subcommand("phase", "level curves of the vertical subsystems");
  phase->add_option("--case", pc.kind, "bang | singular")->check(CLI::IsMember({"bang", "singular"}));
  phase->add_option("--h4", pc.h4);
  phase->add_option("--h5", pc.h5);
  phase->add_option("--hf4", pc.hf4, "normalized h4 (+-1)");
  phase->add_option("--hf5", pc.hf5, "normalized h5 (>= 0)");
  phase->add_option("--levels", pc.levels, "energy levels; default: critical values and midpoints")->delimiter(',');
  phase->add_option("--samples", pc.samples, "samples per curve");
  add_output(phase, pc.output);

  AttainableConfig ac;
  auto* att = app.add_subcommand("attainable", "membership queries and sampled sections");
  att->add_option("--point", ac.point, "x,y,z,v,w")->delimiter(',');
  att->add_option("--T", ac.T, "horizon");
  att->add_option("--tol", ac.tol, "membership slack in the normalized chart");
  att->add_option("--section", ac.section, "xz | xw | zw | full");
  att->add_option("--x", ac.x_slice, "x1 / T of the zw slice");
  att->add_option("--grid", ac.grid, "duration lattice size");
  att->add_option("--max-rows", ac.max_rows, "thin the emitted cloud to at most this many rows");
  att->add_option("--jobs", ac.jobs, "worker threads");
  add_output(att, ac.output);

  VerifyConfig vc;
  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("--suite", vc.suites, "suite name (repeatable); default all")->check(CLI::IsMember(suite_names()));
  ver->add_option("--seed", vc.seed, "random seed");
  ver->add_option("--jobs", vc.jobs, "worker threads for the section sweep");
  ver->add_option("--grid", vc.grid, "duration lattice of the brute-force section");
  add_output(ver, vc.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*traj) return cmd_trajectory(tc, std::cerr);
    if (*phase) return cmd_phase(pc, std::cerr);
    if (*att) return cmd_attainable(ac, std::cerr);
    if (*ver) return cmd_verify(vc, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace cartan::cli
