#include "yspec/potential.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "yspec/errors.hpp"

namespace yspec {

namespace {
constexpr double kJoinTol = 1e-12;
constexpr double kMinSlope = 1e-14;

std::string seg_label(size_t i) {
  return "segment " + std::to_string(i);
}
}  // namespace

PiecewiseLinearPotential::PiecewiseLinearPotential(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty())
    fail(ErrorKind::kBadSegmentCover, "potential needs at least one segment");
  if (std::fabs(segments_.front().x_lo + 1.0) > kJoinTol)
    fail(ErrorKind::kBadSegmentCover, "first segment must start at x = -1");
  if (std::fabs(segments_.back().x_hi - 1.0) > kJoinTol)
    fail(ErrorKind::kBadSegmentCover, "last segment must end at x = +1");
  for (size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (!(s.x_hi - s.x_lo > kJoinTol))
      fail(ErrorKind::kBadSegmentCover, seg_label(i) + ": x_lo must be < x_hi");
    if (std::abs(s.slope) < kMinSlope)
      fail(ErrorKind::kZeroSlope, seg_label(i) + ": slope vanishes");
    if (i + 1 < segments_.size()) {
      const Segment& t = segments_[i + 1];
      if (std::fabs(s.x_hi - t.x_lo) > kJoinTol)
        fail(ErrorKind::kBadSegmentCover,
             seg_label(i) + ": gap or overlap at the join");
      double scale = 1.0 + std::abs(s.slope) + std::abs(s.offset);
      bool same_value = std::abs(s.at(s.x_hi) - t.at(s.x_hi)) <= kJoinTol * scale;
      bool same_slope = std::abs(s.slope - t.slope) <= kJoinTol * scale;
      if (same_value && same_slope)
        fail(ErrorKind::kDegenerateJoin,
             seg_label(i) + ": adjacent segments continue the same line");
    }
  }
}

std::vector<double> PiecewiseLinearPotential::breakpoints() const {
  std::vector<double> b;
  for (size_t i = 0; i + 1 < segments_.size(); ++i) b.push_back(segments_[i].x_hi);
  return b;
}

Cplx PiecewiseLinearPotential::evaluate(double x) const {
  if (x < segments_.front().x_lo - kJoinTol || x > segments_.back().x_hi + kJoinTol)
    fail(ErrorKind::kBadArgument, "evaluate: x outside [-1, 1]");
  // left-limit convention: x belongs to the first segment with x <= x_hi
  for (const Segment& s : segments_) {
    if (x <= s.x_hi) return s.at(x);
  }
  return segments_.back().at(x);
}

Cplx PiecewiseLinearPotential::join_jump(int i) const {
  if (i < 0 || i + 1 >= size()) fail(ErrorKind::kBadArgument, "join_jump: bad index");
  double xi = segments_[static_cast<size_t>(i)].x_hi;
  return segments_[static_cast<size_t>(i) + 1].at(xi) -
         segments_[static_cast<size_t>(i)].at(xi);
}

bool PiecewiseLinearPotential::is_continuous_join(int i, double tol) const {
  const Segment& s = segments_[static_cast<size_t>(i)];
  double scale = 1.0 + std::abs(s.slope) + std::abs(s.offset);
  return std::abs(join_jump(i)) <= tol * scale;
}

PiecewiseLinearPotential jump_potential(double delta) {
  if (!(delta > 0))
    fail(ErrorKind::kBadArgument,
         "jump potential requires delta > 0 (delta = 0 degenerates to one line)");
  const Cplx i1{0.0, 1.0};
  return PiecewiseLinearPotential({
      {-1.0, 0.0, i1, -i1 * delta},  // i(x - delta) left of the jump
      {0.0, 1.0, i1, i1 * delta},    // i(x + delta) right of it
  });
}

PiecewiseLinearPotential figure3_potential() {
  return PiecewiseLinearPotential({
      {-1.0, 0.0, {0.0, 2.0}, {0.0, 1.0}},
      {0.0, 1.0, {1.0, 1.0}, {0.0, 0.0}},
  });
}

namespace {
PiecewiseLinearPotential potential_from_parsed(const nlohmann::json& j) {
  if (j.contains("preset")) {
    std::string p = j.at("preset").get<std::string>();
    if (p == "jump") {
      if (!j.contains("delta"))
        fail(ErrorKind::kBadArgument, "preset jump requires \"delta\"");
      return jump_potential(j.at("delta").get<double>());
    }
    if (p == "figure3") return figure3_potential();
    fail(ErrorKind::kBadArgument, "unknown preset \"" + p + "\"");
  }
  if (!j.contains("segments") || !j.at("segments").is_array())
    fail(ErrorKind::kBadArgument, "potential JSON needs \"segments\" or \"preset\"");
  std::vector<Segment> segs;
  for (const auto& e : j.at("segments")) {
    Segment s;
    s.x_lo = e.at("x_lo").get<double>();
    s.x_hi = e.at("x_hi").get<double>();
    s.slope = {e.at("m_re").get<double>(), e.at("m_im").get<double>()};
    s.offset = {e.at("l_re").get<double>(), e.at("l_im").get<double>()};
    segs.push_back(s);
  }
  return PiecewiseLinearPotential(std::move(segs));
}
}  // namespace

PiecewiseLinearPotential potential_from_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kBadArgument, std::string("potential JSON parse error: ") + e.what());
  }
  try {
    return potential_from_parsed(j);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kBadArgument, std::string("potential JSON field error: ") + e.what());
  }
}

PiecewiseLinearPotential potential_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kBadArgument, "cannot open potential file " + path);
  return potential_from_json(in);
}

SegmentFrame segment_frame(Cplx alpha, Cplx beta) {
  double span = std::abs(beta - alpha);
  if (!(span > 1e-14 * (1.0 + std::abs(alpha) + std::abs(beta))))
    fail(ErrorKind::kBadArgument, "segment frame: endpoint values coincide");
  return {0.5 * (alpha + beta), 0.5 * span, std::arg(beta - alpha)};
}

Cplx frame_to_local(const SegmentFrame& f, Cplx lambda) {
  return (lambda - f.center) / f.half_span;
}

Cplx frame_from_local(const SegmentFrame& f, Cplx mu) {
  return f.center + f.half_span * mu;
}

}  // namespace yspec
