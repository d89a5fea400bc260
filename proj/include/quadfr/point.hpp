#pragma once

#include <string>
#include <vector>

namespace quadfr {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Interior solution points on the reference square [-1,1]^2.
struct PointSet {
  std::vector<Point2> coords;
  std::string label;

  std::size_t size() const noexcept { return coords.size(); }
};

}  // namespace quadfr
