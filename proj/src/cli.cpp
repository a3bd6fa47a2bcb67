#include "yspec/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "yspec/discrete.hpp"
#include "yspec/errors.hpp"
#include "yspec/export.hpp"
#include "yspec/potential.hpp"
#include "yspec/solver.hpp"
#include "yspec/stokes.hpp"

namespace yspec::cli {

namespace {

struct CommonOpts {
  std::string preset;          // "jump" | "figure3" | "" (use file)
  std::optional<double> delta;
  std::string potential_file;
  std::string format = "csv";
  std::string output;  // empty = stdout
};

PiecewiseLinearPotential make_potential(const CommonOpts& o) {
  if (!o.potential_file.empty()) return potential_from_json_file(o.potential_file);
  if (o.preset == "jump") {
    if (!o.delta) fail(ErrorKind::kBadArgument, "--preset jump requires --delta");
    return jump_potential(*o.delta);
  }
  if (o.preset == "figure3") return figure3_potential();
  fail(ErrorKind::kBadArgument,
       "no potential given: use --preset jump|figure3 or --potential FILE");
}

void describe_potential(const CommonOpts& o, ParamMap& p) {
  if (!o.potential_file.empty()) {
    p["potential"] = o.potential_file;
  } else {
    p["preset"] = o.preset;
    if (o.delta) p["delta"] = fmt17(*o.delta);
  }
}

SearchRegion parse_region(const std::string& s) {
  SearchRegion r;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(s);
  if (!(in >> r.re_lo >> c1 >> r.re_hi >> c2 >> r.im_lo >> c3 >> r.im_hi) ||
      c1 != ',' || c2 != ',' || c3 != ',' || !(in >> std::ws).eof())
    fail(ErrorKind::kBadArgument, "--region expects re_lo,re_hi,im_lo,im_hi");
  if (!(r.re_lo < r.re_hi) || !(r.im_lo < r.im_hi))
    fail(ErrorKind::kBadArgument, "--region bounds must be ordered");
  return r;
}

std::vector<double> parse_h_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::kBadArgument, "--h: cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::kBadArgument, "--h: empty list");
  for (double v : out)
    if (!(v > 0)) fail(ErrorKind::kBadArgument, "--h values must be positive");
  return out;
}

void parse_grid(const std::string& s, int& nx, int& ny) {
  char x = 0;
  std::istringstream in(s);
  if (!(in >> nx >> x >> ny) || (x != 'x' && x != 'X') || !(in >> std::ws).eof())
    fail(ErrorKind::kBadArgument, "--grid expects WxH, e.g. 200x200");
  if (nx < 2 || ny < 2)
    fail(ErrorKind::kBadArgument, "--grid resolution must be at least 2x2");
}

double require_positive(double v, const char* flag) {
  if (!(v > 0)) fail(ErrorKind::kBadArgument, std::string(flag) + " must be positive");
  return v;
}

// Runs the writer against --output (or stdout when empty).
template <class Fn>
void with_output(const std::string& path, Fn&& writer) {
  if (path.empty()) {
    writer(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) fail(ErrorKind::kBadArgument, "cannot open output file: " + path);
  writer(os);
  if (!os) fail(ErrorKind::kBadArgument, "write failed: " + path);
}

struct SkeletonOpts {
  CommonOpts common;
  double r_trunc = 10.0;
  double step = 0.0;
};

int run_skeleton(const SkeletonOpts& o) {
  PiecewiseLinearPotential v = make_potential(o.common);
  SpectralSkeleton s = skeleton(v, require_positive(o.r_trunc, "--r-trunc"), o.step);
  ParamMap p;
  p["command"] = "skeleton";
  describe_potential(o.common, p);
  p["r_trunc"] = fmt17(o.r_trunc);
  p["step"] = fmt17(o.step);
  with_output(o.common.output, [&](std::ostream& os) {
    if (o.common.format == "json")
      write_skeleton_json(os, s, p);
    else
      write_skeleton_csv(os, s, p);
  });
  return kExitOk;
}

struct SpectrumOpts {
  CommonOpts common;
  double h = 0.05;
  std::string region = "-1.55,1.55,-1.55,1.55";
  double eps = 0.05;
  double window = 1.5;
  double r_trunc = 10.0;
  double min_box = 1e-4;
};

int run_spectrum(const SpectrumOpts& o) {
  PiecewiseLinearPotential v = make_potential(o.common);
  require_positive(o.h, "--h");
  require_positive(o.eps, "--eps");
  require_positive(o.window, "--window");
  SearchRegion region = parse_region(o.region);
  SolveOptions sopt;
  sopt.min_box = require_positive(o.min_box, "--min-box");

  EigenvalueSet eigs = solve_spectrum(v, o.h, region, sopt);
  SpectralSkeleton skel = skeleton(v, require_positive(o.r_trunc, "--r-trunc"));
  ContainmentReport cont = containment_report(eigs, skel, o.eps, o.window);

  ParamMap p;
  p["command"] = "spectrum";
  describe_potential(o.common, p);
  p["h"] = fmt17(o.h);
  p["region"] = o.region;
  p["eps"] = fmt17(o.eps);
  p["window"] = fmt17(o.window);
  p["r_trunc"] = fmt17(o.r_trunc);
  p["min_box"] = fmt17(o.min_box);
  with_output(o.common.output, [&](std::ostream& os) {
    if (o.common.format == "json")
      write_spectrum_json(os, eigs, cont, p);
    else
      write_spectrum_csv(os, eigs, cont, p);
  });
  if (!cont.all_pass) {
    std::cerr << "containment failed: max distance " << fmt17(cont.max_distance)
              << " exceeds eps " << fmt17(cont.eps) << " inside |lambda| <= "
              << fmt17(cont.window) << "\n";
    return kExitAssertFailed;
  }
  return kExitOk;
}

struct LimitsOpts {
  std::string h_list = "0.1,0.05,0.025";
  double p = 0.5;
  std::string region = "-1.55,1.55,-1.55,1.55";
  double window = 1.5;
  std::string format = "csv";
  std::string output;
};

int run_limits(const LimitsOpts& o) {
  require_positive(o.p, "--p");
  std::vector<double> hs = parse_h_list(o.h_list);
  SearchRegion region = parse_region(o.region);
  LimitReport rep = limit_experiment(o.p, hs, region,
                                     require_positive(o.window, "--window"));
  ParamMap p;
  p["command"] = "limits";
  p["p"] = fmt17(o.p);
  p["h"] = o.h_list;
  p["region"] = o.region;
  p["window"] = fmt17(o.window);
  with_output(o.output, [&](std::ostream& os) {
    if (o.format == "json")
      write_limits_json(os, rep, p);
    else
      write_limits_csv(os, rep, p);
  });
  if (!rep.predicted_monotone) {
    std::cerr << "limit dichotomy violated: the predicted distance column is "
                 "not strictly decreasing for p = "
              << fmt17(o.p) << "\n";
    return kExitAssertFailed;
  }
  return kExitOk;
}

struct PseudoOpts {
  CommonOpts common;
  double h = 0.05;
  int n = 1500;
  std::string grid = "200x200";
  std::string region = "-1.55,1.55,-1.55,1.55";
  int threads = 0;
  bool midpoint_average = false;
};

int run_pseudospectra(const PseudoOpts& o) {
  PiecewiseLinearPotential v = make_potential(o.common);
  require_positive(o.h, "--h");
  if (o.n < 2) fail(ErrorKind::kBadArgument, "--n must be at least 2");
  int nx = 0, ny = 0;
  parse_grid(o.grid, nx, ny);
  SearchRegion box = parse_region(o.region);

  DiscreteOperator a = discretize(v, o.h, o.n, o.midpoint_average);
  PseudospectraGrid g = pseudospectra_grid(a, box, nx, ny, o.threads);

  ParamMap p;
  p["command"] = "pseudospectra";
  describe_potential(o.common, p);
  p["h"] = fmt17(o.h);
  p["n"] = std::to_string(o.n);
  p["grid"] = o.grid;
  p["region"] = o.region;
  p["midpoint_average"] = o.midpoint_average ? "true" : "false";
  with_output(o.common.output, [&](std::ostream& os) {
    if (o.common.format == "json")
      write_grid_json(os, g, p);
    else
      write_grid_csv(os, g, p);
  });
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset, "built-in potential: jump or figure3")
      ->check(CLI::IsMember({"jump", "figure3"}));
  cmd->add_option("--delta", o.delta, "jump size for --preset jump");
  cmd->add_option("--potential", o.potential_file, "potential JSON file");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", o.output, "output file (default: stdout)");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "spectra of -h^2 d^2/dx^2 + V(x) on (-1,1) for piecewise linear "
      "complex V: Y-shaped limit skeletons, determinant eigenvalues, "
      "coupled-limit experiments, and finite-difference pseudospectra"};
  app.require_subcommand(1);

  SkeletonOpts sk;
  CLI::App* c_sk = app.add_subcommand(
      "skeleton", "trace the Y-shaped limit figures of the potential");
  add_common(c_sk, sk.common);
  c_sk->add_option("--r-trunc", sk.r_trunc, "curve truncation radius");
  c_sk->add_option("--step", sk.step, "curve vertex spacing (0 = auto)");

  SpectrumOpts sp;
  CLI::App* c_sp = app.add_subcommand(
      "spectrum", "find determinant eigenvalues and check containment");
  c_sp->set_help_flag("--help", "print help");  // frees -h for --h below
  add_common(c_sp, sp.common);
  c_sp->add_option("--h", sp.h, "semiclassical parameter");
  c_sp->add_option("--region", sp.region, "search box re_lo,re_hi,im_lo,im_hi");
  c_sp->add_option("--eps", sp.eps, "containment neighbourhood radius");
  c_sp->add_option("--window", sp.window, "containment window |lambda| <= w");
  c_sp->add_option("--r-trunc", sp.r_trunc, "skeleton truncation radius");
  c_sp->add_option("--min-box", sp.min_box, "smallest subdivision box");

  LimitsOpts lm;
  CLI::App* c_lm = app.add_subcommand(
      "limits", "coupled-limit experiment with delta = h^(1/p)");
  c_lm->set_help_flag("--help", "print help");
  c_lm->add_option("--p", lm.p, "coupling exponent (delta = h^(1/p))");
  c_lm->add_option("--h", lm.h_list, "comma-separated h values");
  c_lm->add_option("--region", lm.region, "search box re_lo,re_hi,im_lo,im_hi");
  c_lm->add_option("--window", lm.window, "distance window |lambda| <= w");
  c_lm->add_option("--format", lm.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  c_lm->add_option("--output", lm.output, "output file (default: stdout)");

  PseudoOpts ps;
  CLI::App* c_ps = app.add_subcommand(
      "pseudospectra", "log10 sigma_min grid of the finite-difference matrix");
  c_ps->set_help_flag("--help", "print help");
  add_common(c_ps, ps.common);
  c_ps->add_option("--h", ps.h, "semiclassical parameter");
  c_ps->add_option("--n", ps.n, "interior grid points of the discretization");
  c_ps->add_option("--grid", ps.grid, "lattice resolution WxH");
  c_ps->add_option("--region", ps.region, "lattice box re_lo,re_hi,im_lo,im_hi");
  c_ps->add_option("--threads", ps.threads, "worker threads (0 = auto)")
      ->envname("YSPEC_THREADS");
  c_ps->add_flag("--midpoint-average", ps.midpoint_average,
                 "average V across jumps at grid points on a breakpoint");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (c_sk->parsed()) return run_skeleton(sk);
    if (c_sp->parsed()) return run_spectrum(sp);
    if (c_lm->parsed()) return run_limits(lm);
    if (c_ps->parsed()) return run_pseudospectra(ps);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_validation_error(e.kind()) ? kExitBadInput : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace yspec::cli
