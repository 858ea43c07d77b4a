#pragma once
// Number-building rules a scheme carries as data.

#include <string>
#include <vector>

namespace classweave {

// "Add to base number <base> the numbers following <strip> in
// <source_left>-<source_right>". All fields are plain digit strings.
struct AddInstruction {
    std::string base;
    std::string source_left;
    std::string source_right;
    std::string strip_prefix;

    // Empty when the instruction is well formed, otherwise the reason.
    std::string problem() const;

    friend bool operator==(const AddInstruction&, const AddInstruction&) = default;
};

enum class Marker {
    uppercase_letters,  // A, PIJ
    dash_digits,        // -1, -23 (digits 1-9)
    lowercase_letters,  // aa, ac
    zero_led_digits,    // 02, 031
};

struct FacetSlot {
    std::string name;
    Marker marker;
    friend bool operator==(const FacetSlot&, const FacetSlot&) = default;
};

// Citation order for a syntactically expressive notation.
struct FacetFormula {
    std::string name;
    std::vector<FacetSlot> slots;

    std::string problem() const;
};

const char* marker_name(Marker m);
// Accepts the names produced by marker_name. Returns false on unknown names.
bool marker_from_name(const std::string& name, Marker& out);

}  // namespace classweave
