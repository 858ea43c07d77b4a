#include "classweave/rules.hpp"

#include <set>

#include "classweave/notation.hpp"

namespace classweave {

std::string AddInstruction::problem() const {
    for (const auto* f : {&base, &source_left, &source_right, &strip_prefix}) {
        if (!is_digit_string(*f)) return "add instruction fields must be digit strings";
    }
    if (source_left.size() != source_right.size()) return "add instruction span endpoints differ in length";
    if (!(source_left < source_right)) return "add instruction span is empty or reversed";
    if (source_left.compare(0, strip_prefix.size(), strip_prefix) != 0 ||
        source_right.compare(0, strip_prefix.size(), strip_prefix) != 0) {
        return "strip prefix " + strip_prefix + " does not prefix both span endpoints";
    }
    return {};
}

std::string FacetFormula::problem() const {
    if (slots.empty()) return "facet formula '" + name + "' has no slots";
    std::set<std::string> names;
    std::set<Marker> markers;
    for (const auto& s : slots) {
        if (s.name.empty()) return "facet formula '" + name + "' has an unnamed slot";
        if (!names.insert(s.name).second) return "facet formula '" + name + "' repeats slot " + s.name;
        if (!markers.insert(s.marker).second) {
            return "facet formula '" + name + "' reuses marker " + marker_name(s.marker);
        }
    }
    return {};
}

const char* marker_name(Marker m) {
    switch (m) {
        case Marker::uppercase_letters: return "uppercase-letters";
        case Marker::dash_digits: return "dash-digits";
        case Marker::lowercase_letters: return "lowercase-letters";
        case Marker::zero_led_digits: return "zero-led-digits";
    }
    return "?";
}

bool marker_from_name(const std::string& name, Marker& out) {
    for (Marker m : {Marker::uppercase_letters, Marker::dash_digits, Marker::lowercase_letters,
                     Marker::zero_led_digits}) {
        if (name == marker_name(m)) {
            out = m;
            return true;
        }
    }
    return false;
}

}  // namespace classweave
