#include "yspec/export.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace yspec {

namespace {

using nlohmann::ordered_json;

void write_params_comments(std::ostream& os, const ParamMap& params) {
  for (const auto& [k, v] : params) os << "# " << k << "=" << v << "\n";
}

ordered_json params_json(const ParamMap& params) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_skeleton_csv(std::ostream& os, const SpectralSkeleton& s,
                        const ParamMap& params) {
  os << "# yspec skeleton\n";
  write_params_comments(os, params);
  os << "figure,kind,index,re,im\n";
  for (size_t f = 0; f < s.figures.size(); ++f) {
    const YFigure& fig = s.figures[f];
    auto row = [&](const char* kind, size_t idx, Cplx z) {
      os << f << "," << kind << "," << idx << "," << fmt17(z.real()) << ","
         << fmt17(z.imag()) << "\n";
    };
    row("alpha", 0, fig.alpha);
    row("beta", 0, fig.beta);
    row("gamma", 0, fig.gamma);
    for (size_t i = 0; i < fig.curve.size(); ++i) row("curve", i, fig.curve[i]);
  }
}

void write_skeleton_json(std::ostream& os, const SpectralSkeleton& s,
                         const ParamMap& params) {
  ordered_json j;
  j["kind"] = "skeleton";
  j["params"] = params_json(params);
  j["r_trunc"] = s.r_trunc;
  j["figures"] = ordered_json::array();
  for (const YFigure& fig : s.figures) {
    ordered_json jf;
    jf["alpha"] = {fig.alpha.real(), fig.alpha.imag()};
    jf["beta"] = {fig.beta.real(), fig.beta.imag()};
    jf["gamma"] = {fig.gamma.real(), fig.gamma.imag()};
    jf["asymptote_im"] = fig.asymptote_im;
    ordered_json curve = ordered_json::array();
    for (Cplx z : fig.curve) curve.push_back({z.real(), z.imag()});
    jf["curve"] = std::move(curve);
    j["figures"].push_back(std::move(jf));
  }
  os << j.dump(2) << "\n";
}

void write_spectrum_csv(std::ostream& os, const EigenvalueSet& eigs,
                        const ContainmentReport& cont, const ParamMap& params) {
  os << "# yspec spectrum\n";
  write_params_comments(os, params);
  os << "# containment eps=" << fmt17(cont.eps) << " window=" << fmt17(cont.window)
     << " max_distance=" << fmt17(cont.max_distance)
     << " all_pass=" << bool_str(cont.all_pass) << "\n";
  os << "lambda_re,lambda_im,winding,residual_log,dist_to_skeleton\n";
  // containment rows are the within-window eigenvalues in eigenvalue order;
  // rows outside the window carry an empty distance field
  size_t ci = 0;
  for (const Eigenvalue& e : eigs.entries) {
    os << fmt17(e.lambda.real()) << "," << fmt17(e.lambda.imag()) << ","
       << e.winding << "," << fmt17(e.residual_log) << ",";
    if (ci < cont.rows.size() && cont.rows[ci].lambda == e.lambda) {
      os << fmt17(cont.rows[ci].distance);
      ++ci;
    }
    os << "\n";
  }
  for (const UnresolvedCluster& c : eigs.unresolved) {
    os << "# unresolved re_lo=" << fmt17(c.box.re_lo)
       << " re_hi=" << fmt17(c.box.re_hi) << " im_lo=" << fmt17(c.box.im_lo)
       << " im_hi=" << fmt17(c.box.im_hi) << " winding=" << c.winding << "\n";
  }
}

void write_spectrum_json(std::ostream& os, const EigenvalueSet& eigs,
                         const ContainmentReport& cont, const ParamMap& params) {
  ordered_json j;
  j["kind"] = "spectrum";
  j["params"] = params_json(params);
  j["h"] = eigs.h;
  if (eigs.delta) j["delta"] = *eigs.delta;
  if (eigs.p) j["p"] = *eigs.p;
  j["eigenvalues"] = ordered_json::array();
  size_t ci = 0;
  for (const Eigenvalue& e : eigs.entries) {
    ordered_json je;
    je["lambda"] = {e.lambda.real(), e.lambda.imag()};
    je["winding"] = e.winding;
    je["residual_log"] = e.residual_log;
    if (ci < cont.rows.size() && cont.rows[ci].lambda == e.lambda) {
      je["dist_to_skeleton"] = cont.rows[ci].distance;
      je["contained"] = cont.rows[ci].pass;
      ++ci;
    }
    j["eigenvalues"].push_back(std::move(je));
  }
  j["containment"] = {{"eps", cont.eps},
                      {"window", cont.window},
                      {"max_distance", cont.max_distance},
                      {"all_pass", cont.all_pass}};
  j["unresolved"] = ordered_json::array();
  for (const UnresolvedCluster& c : eigs.unresolved) {
    j["unresolved"].push_back({{"re_lo", c.box.re_lo},
                               {"re_hi", c.box.re_hi},
                               {"im_lo", c.box.im_lo},
                               {"im_hi", c.box.im_hi},
                               {"winding", c.winding}});
  }
  os << j.dump(2) << "\n";
}

void write_limits_csv(std::ostream& os, const LimitReport& rep,
                      const ParamMap& params) {
  os << "# yspec limits\n";
  write_params_comments(os, params);
  os << "# p=" << fmt17(rep.p) << " window=" << fmt17(rep.window)
     << " predicted_monotone=" << bool_str(rep.predicted_monotone) << "\n";
  os << "h,delta,dist_single,dist_double\n";
  for (const LimitRow& r : rep.rows) {
    os << fmt17(r.h) << "," << fmt17(r.delta) << "," << fmt17(r.dist_single)
       << "," << fmt17(r.dist_double) << "\n";
  }
}

void write_limits_json(std::ostream& os, const LimitReport& rep,
                       const ParamMap& params) {
  ordered_json j;
  j["kind"] = "limits";
  j["params"] = params_json(params);
  j["p"] = rep.p;
  j["window"] = rep.window;
  j["predicted_monotone"] = rep.predicted_monotone;
  j["rows"] = ordered_json::array();
  for (const LimitRow& r : rep.rows) {
    j["rows"].push_back({{"h", r.h},
                         {"delta", r.delta},
                         {"dist_single", r.dist_single},
                         {"dist_double", r.dist_double}});
  }
  os << j.dump(2) << "\n";
}

void write_grid_csv(std::ostream& os, const PseudospectraGrid& g,
                    const ParamMap& params) {
  os << "# yspec pseudospectra\n";
  write_params_comments(os, params);
  os << "# nx=" << g.nx << " ny=" << g.ny << " re_lo=" << fmt17(g.box.re_lo)
     << " re_hi=" << fmt17(g.box.re_hi) << " im_lo=" << fmt17(g.box.im_lo)
     << " im_hi=" << fmt17(g.box.im_hi) << " scale=" << fmt17(g.scale) << "\n";
  os << "iy,ix,z_re,z_im,log10_sigma_min\n";
  const double dxg = g.box.width() / g.nx, dyg = g.box.height() / g.ny;
  for (int j = 0; j < g.ny; ++j) {
    for (int k = 0; k < g.nx; ++k) {
      Cplx z(g.box.re_lo + (k + 0.5) * dxg, g.box.im_lo + (j + 0.5) * dyg);
      os << j << "," << k << "," << fmt17(z.real()) << "," << fmt17(z.imag())
         << "," << fmt17(g.log10_sigma[static_cast<size_t>(j) * g.nx + k]) << "\n";
    }
  }
}

void write_grid_json(std::ostream& os, const PseudospectraGrid& g,
                     const ParamMap& params) {
  ordered_json j;
  j["kind"] = "pseudospectra";
  j["params"] = params_json(params);
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["box"] = {{"re_lo", g.box.re_lo},
              {"re_hi", g.box.re_hi},
              {"im_lo", g.box.im_lo},
              {"im_hi", g.box.im_hi}};
  j["scale"] = g.scale;
  j["log10_sigma_min"] = g.log10_sigma;
  os << j.dump(2) << "\n";
}

}  // namespace yspec
