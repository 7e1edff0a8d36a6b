#include "polybary/coords.hpp"

namespace polybary {

Family family_from_string(const std::string& s) {
    if (s == "tri" || s == "triangulation") return Family::Triangulation;
    if (s == "wachspress" || s == "wach") return Family::Wachspress;
    if (s == "sibson") return Family::Sibson;
    if (s == "harmonic") return Family::Harmonic;
    throw Error("unknown family: " + s);
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Triangulation: return "tri";
        case Family::Wachspress: return "wachspress";
        case Family::Sibson: return "sibson";
        case Family::Harmonic: return "harmonic";
    }
    return "?";
}

}  // namespace polybary
