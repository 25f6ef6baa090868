#include "geonarrate/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace geonarrate {

namespace {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, false, true>;  // ccw, closed
using BgMulti = bg::model::multi_polygon<BgPolygon>;
using BgLine = bg::model::linestring<BgPoint>;

BgPolygon to_boost(const Region& r) {
  BgPolygon poly;
  const auto& rings = r.rings();
  for (const Point& p : rings[0]) poly.outer().push_back(BgPoint(p.x, p.y));
  poly.inners().resize(rings.size() - 1);
  for (size_t h = 1; h < rings.size(); ++h) {
    for (const Point& p : rings[h]) poly.inners()[h - 1].push_back(BgPoint(p.x, p.y));
  }
  return poly;
}

std::vector<BgLine> boundary_lines(const Region& r) {
  std::vector<BgLine> lines;
  for (const auto& ring : r.rings()) {
    BgLine line;
    for (const Point& p : ring) line.push_back(BgPoint(p.x, p.y));
    lines.push_back(std::move(line));
  }
  return lines;
}

// Mean width of a (multi)polygon: for a sliver of near-constant width w the
// value 2*area/perimeter approaches w. Zero for an empty multi-polygon.
double mean_width(const BgMulti& m) {
  double a = bg::area(m);
  double p = bg::perimeter(m);
  return p > 0 ? 2.0 * a / p : 0.0;
}

// Deterministic geometric ordering so that classification of (a,b) and (b,a)
// is computed on one canonical argument order and converse coherence is exact.
bool canonical_less(const Region& a, const Region& b) {
  const auto& ra = a.rings();
  const auto& rb = b.rings();
  if (ra.size() != rb.size()) return ra.size() < rb.size();
  for (size_t k = 0; k < ra.size(); ++k) {
    if (ra[k].size() != rb[k].size()) return ra[k].size() < rb[k].size();
    for (size_t v = 0; v < ra[k].size(); ++v) {
      if (ra[k][v].x != rb[k][v].x) return ra[k][v].x < rb[k][v].x;
      if (ra[k][v].y != rb[k][v].y) return ra[k][v].y < rb[k][v].y;
    }
  }
  return false;
}

struct PairMeasures {
  double overlap_width = 0;     // mean width of the intersection
  double separation = 0;        // min distance between regions
  double residual_a = 0;        // area of a outside b
  double residual_b = 0;        // area of b outside a
  double residual_width_a = 0;  // residual_a spread along a's boundary
  double residual_width_b = 0;
  double rim_distance = 0;      // min distance between the two boundaries
};

PairMeasures measure(const Region& a, const Region& b) {
  BgPolygon pa = to_boost(a), pb = to_boost(b);
  BgMulti inter;
  bg::intersection(pa, pb, inter);
  PairMeasures m;
  m.overlap_width = mean_width(inter);
  m.separation = bg::area(inter) > 0 ? 0.0 : bg::distance(pa, pb);
  m.residual_a = a.area() - bg::area(inter);
  m.residual_b = b.area() - bg::area(inter);
  m.residual_width_a = m.residual_a / a.perimeter();
  m.residual_width_b = m.residual_b / b.perimeter();
  double rim = std::numeric_limits<double>::infinity();
  for (const BgLine& la : boundary_lines(a)) {
    for (const BgLine& lb : boundary_lines(b)) {
      rim = std::min(rim, bg::distance(la, lb));
    }
  }
  m.rim_distance = rim;
  return m;
}

Rcc8 classify(const PairMeasures& m, double eps) {
  bool interiors_meet = m.overlap_width > eps;
  if (!interiors_meet) return m.separation <= eps ? Rcc8::ec : Rcc8::dc;
  bool a_in_b = m.residual_width_a <= 0.5 * eps;
  bool b_in_a = m.residual_width_b <= 0.5 * eps;
  if (a_in_b && b_in_a) return Rcc8::eq;
  if (a_in_b) return m.rim_distance <= eps ? Rcc8::tpp : Rcc8::ntpp;
  if (b_in_a) return m.rim_distance <= eps ? Rcc8::tppi : Rcc8::ntppi;
  return Rcc8::po;
}

}  // namespace

double BBox::diagonal() const { return std::hypot(max_x - min_x, max_y - min_y); }

Region Region::from_rings(std::vector<std::vector<Point>> rings) {
  if (rings.empty() || rings[0].size() < 3) throw GeometryError("polygon needs an outer ring");
  Region r;
  r.rings_ = std::move(rings);
  // Close rings if the input left them open.
  for (auto& ring : r.rings_) {
    if (ring.size() < 3) throw GeometryError("ring with fewer than 3 vertices");
    if (ring.front().x != ring.back().x || ring.front().y != ring.back().y) {
      ring.push_back(ring.front());
    }
  }
  BgPolygon poly = to_boost(r);
  bg::correct(poly);  // normalizes ring orientation and closure
  std::string reason;
  if (!bg::is_valid(poly, reason)) throw GeometryError("invalid polygon: " + reason);
  r.area_ = bg::area(poly);
  if (r.area_ < kDegenerateArea) throw GeometryError("degenerate polygon (area below tolerance)");
  r.perimeter_ = bg::perimeter(poly);
  BgPoint c;
  bg::centroid(poly, c);
  r.centroid_ = {bg::get<0>(c), bg::get<1>(c)};
  bg::model::box<BgPoint> box;
  bg::envelope(poly, box);
  r.bbox_ = {bg::get<bg::min_corner, 0>(box), bg::get<bg::min_corner, 1>(box),
             bg::get<bg::max_corner, 0>(box), bg::get<bg::max_corner, 1>(box)};
  // Store back the corrected rings so canonical ordering sees normal form.
  r.rings_[0].clear();
  for (const BgPoint& p : poly.outer()) r.rings_[0].push_back({bg::get<0>(p), bg::get<1>(p)});
  for (size_t h = 0; h + 1 < r.rings_.size(); ++h) {
    r.rings_[h + 1].clear();
    for (const BgPoint& p : poly.inners()[h])
      r.rings_[h + 1].push_back({bg::get<0>(p), bg::get<1>(p)});
  }
  return r;
}

double intersection_area(const Region& a, const Region& b) {
  BgMulti inter;
  bg::intersection(to_boost(a), to_boost(b), inter);
  return bg::area(inter);
}

double union_area(const std::vector<const Region*>& regions) {
  BgMulti acc;
  for (const Region* r : regions) {
    BgMulti next;
    bg::union_(acc, to_boost(*r), next);
    acc = std::move(next);
  }
  return bg::area(acc);
}

Point union_centroid(const std::vector<const Region*>& regions) {
  BgMulti acc;
  for (const Region* r : regions) {
    BgMulti next;
    bg::union_(acc, to_boost(*r), next);
    acc = std::move(next);
  }
  BgPoint c;
  bg::centroid(acc, c);
  return {bg::get<0>(c), bg::get<1>(c)};
}

double region_distance(const Region& a, const Region& b) {
  if (intersection_area(a, b) > 0) return 0.0;
  return bg::distance(to_boost(a), to_boost(b));
}

double boundary_distance(const Region& a, const Region& b) {
  double rim = std::numeric_limits<double>::infinity();
  for (const BgLine& la : boundary_lines(a)) {
    for (const BgLine& lb : boundary_lines(b)) {
      rim = std::min(rim, bg::distance(la, lb));
    }
  }
  return rim;
}

Rcc8 qualify_pair(const Region& a, const Region& b, double eps) {
  if (!a.valid() || !b.valid()) throw GeometryError("qualify_pair on invalid region");
  if (canonical_less(b, a)) {
    Rcc8 r = qualify_pair(b, a, eps);
    return static_cast<Rcc8>(Calculus::rcc8().converse_atom(atom(r)));
  }
  return classify(measure(a, b), eps);
}

RelationSet qualify_pair_uncertain(const Region& a, const Region& b, double eps,
                                   double error_radius) {
  if (canonical_less(b, a)) {
    return Calculus::rcc8().converse(qualify_pair_uncertain(b, a, eps, error_radius));
  }
  PairMeasures m = measure(a, b);
  Rcc8 point = classify(m, eps);
  RelationSet out = rel(point);
  if (error_radius <= 0) return out;
  const double rho = error_radius;
  // Each decision margin that a shift of up to rho could cross contributes
  // the neighboring classification on the other side of that margin.
  switch (point) {
    case Rcc8::dc:
      if (m.separation - eps <= rho) out.insert(atom(Rcc8::ec));
      break;
    case Rcc8::ec:
      if (eps - m.separation <= rho && m.overlap_width == 0) out.insert(atom(Rcc8::dc));
      if (eps - m.overlap_width <= rho) out.insert(atom(Rcc8::po));
      break;
    case Rcc8::po:
      if (m.overlap_width - eps <= rho) out.insert(atom(Rcc8::ec));
      if (m.residual_width_a - 0.5 * eps <= rho)
        out.insert(atom(m.rim_distance <= eps + rho ? Rcc8::tpp : Rcc8::ntpp));
      if (m.residual_width_b - 0.5 * eps <= rho)
        out.insert(atom(m.rim_distance <= eps + rho ? Rcc8::tppi : Rcc8::ntppi));
      break;
    case Rcc8::tpp:
      if (m.rim_distance + 0.5 * (m.residual_width_a + eps) >= -rho &&
          0.5 * eps - m.residual_width_a <= rho)
        out.insert(atom(Rcc8::po));
      break;
    case Rcc8::ntpp:
      if (m.rim_distance - eps <= rho) out.insert(atom(Rcc8::tpp));
      break;
    case Rcc8::tppi:
      if (0.5 * eps - m.residual_width_b <= rho) out.insert(atom(Rcc8::po));
      break;
    case Rcc8::ntppi:
      if (m.rim_distance - eps <= rho) out.insert(atom(Rcc8::tppi));
      break;
    case Rcc8::eq:
      if (0.5 * eps - m.residual_width_a <= rho || 0.5 * eps - m.residual_width_b <= rho)
        out.insert(atom(Rcc8::po));
      break;
  }
  return out;
}

SizeRel size_relation(const Region& a, const Region& b, double ratio_tol) {
  if (!a.valid() || !b.valid()) throw GeometryError("size_relation on invalid region");
  double larger = std::max(a.area(), b.area());
  if (std::abs(a.area() - b.area()) / larger < ratio_tol) return SizeRel::equal;
  return a.area() < b.area() ? SizeRel::smaller : SizeRel::larger;
}

}  // namespace geonarrate
