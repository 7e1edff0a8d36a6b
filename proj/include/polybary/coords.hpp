#pragma once

#include <string>
#include <vector>

#include "polybary/geometry.hpp"

namespace polybary {

enum class Family { Triangulation, Wachspress, Sibson, Harmonic };

Family family_from_string(const std::string& s);
std::string family_name(Family f);

/// One evaluation of a coordinate family: lambda_i(x) and grad lambda_i(x).
struct CoordSample {
    std::vector<double> values;
    std::vector<Vec2> gradients;
};

class CoordinateField {
  public:
    virtual ~CoordinateField() = default;

    virtual CoordSample eval(const Point2& x) const = 0;
    virtual int size() const = 0;
    virtual const Polygon& polygon() const = 0;
};

}  // namespace polybary
