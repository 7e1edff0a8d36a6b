#pragma once

#include <stdexcept>
#include <string>

namespace polybary {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewVertices : Error { using Error::Error; };
struct TooManyVertices : Error { using Error::Error; };
struct NonConvex : Error { using Error::Error; };
struct DegenerateEdge : Error { using Error::Error; };
struct DegenerateTriangle : Error { using Error::Error; };
struct PointOutside : Error { using Error::Error; };
struct ApexOutside : Error { using Error::Error; };
struct DuplicatePoints : Error { using Error::Error; };
struct AtVertex : Error { using Error::Error; };
struct InvalidThresholds : Error { using Error::Error; };
struct ConditionsNotMet : Error { using Error::Error; };
struct SolverDiverged : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct MissingGradient : Error { using Error::Error; };

}  // namespace polybary
