#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "geonarrate/calculus.hpp"
#include "geonarrate/relation_set.hpp"

namespace geonarrate {

struct Point {
  double x = 0, y = 0;
};

struct BBox {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double diagonal() const;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Area below which a polygon is rejected as degenerate (CRS units squared).
inline constexpr double kDegenerateArea = 1e-12;

// Simple polygon with optional holes in one planar CRS. Rings are stored
// closed (first vertex repeated last) with counterclockwise outer ring and
// clockwise holes; from_rings normalizes orientation/closure and rejects
// self-intersecting or degenerate input.
class Region {
 public:
  Region() = default;
  static Region from_rings(std::vector<std::vector<Point>> rings);

  const std::vector<std::vector<Point>>& rings() const { return rings_; }
  bool valid() const { return !rings_.empty(); }

  double area() const { return area_; }
  double perimeter() const { return perimeter_; }
  Point centroid() const { return centroid_; }
  BBox bbox() const { return bbox_; }

 private:
  std::vector<std::vector<Point>> rings_;  // rings_[0] outer, rest holes
  double area_ = 0, perimeter_ = 0;
  Point centroid_;
  BBox bbox_;
};

double intersection_area(const Region& a, const Region& b);
double union_area(const std::vector<const Region*>& regions);
Point union_centroid(const std::vector<const Region*>& regions);
// Minimum distance between the regions (0 when they touch or overlap).
double region_distance(const Region& a, const Region& b);
// Minimum distance between the boundary rings of the two regions.
double boundary_distance(const Region& a, const Region& b);

// Classifies a region pair into exactly one RCC-8 base relation. Boundary
// contact is decided on eps-thickened boundaries: separations and overlap
// slivers narrower than eps count as touching.
Rcc8 qualify_pair(const Region& a, const Region& b, double eps);

// Like qualify_pair, but widens the result to the permissible conceptual
// neighbors when a positional error of up to `error_radius` could flip the
// classification. Always contains qualify_pair(a, b, eps).
RelationSet qualify_pair_uncertain(const Region& a, const Region& b, double eps,
                                   double error_radius);

// Area comparison; `equal` when the relative difference is below ratio_tol.
SizeRel size_relation(const Region& a, const Region& b, double ratio_tol);

}  // namespace geonarrate
