#pragma once
// Classmark grammar, canonical rendering and digit-string algebra.
//
// A classmark is one of
//   Simple     539.125.46        digits only; dots are presentational
//   Span       539.123/.124      equal-length endpoints, left < right
//   Compound   338.48(469)       main number plus auxiliaries, one per facet
//   Auxiliary  =821.221          a standalone auxiliary (entry of a facet table)
//   Relation   73:75, 73+75      two or more operands joined by a relator
//   OpaqueKey  QD241-441         ordinal notations of explicit-hierarchy schemes
//
// Digit strings compare as strings. A local segment such as the `.000.1` in
// `539.12.000.1` is kept verbatim: the digit string carries a single '.'
// where the segment starts ("53912.0001"). It sorts and prefixes below its
// main number and never collides with `539.120`.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace classweave {

enum class Relator : char { plus = '+', colon = ':' };

struct Simple {
    std::string digits;
    friend bool operator==(const Simple&, const Simple&) = default;
};

struct Span {
    std::string left;
    std::string right;
    friend bool operator==(const Span&, const Span&) = default;
};

struct Auxiliary {
    std::string facet;
    std::string digits;
    std::string open;   // delimiters copied from the facet registry
    std::string close;  // empty for prefix-style facets such as '='
    friend bool operator==(const Auxiliary& a, const Auxiliary& b) {
        return a.facet == b.facet && a.digits == b.digits;
    }
};

struct Compound {
    std::variant<Simple, Span> main;
    std::vector<Auxiliary> auxiliaries;
    friend bool operator==(const Compound&, const Compound&) = default;
};

struct OpaqueKey {
    std::string key;
    friend bool operator==(const OpaqueKey&, const OpaqueKey&) = default;
};

class NotationExpr;

struct Relation {
    Relator op = Relator::colon;
    std::vector<NotationExpr> operands;
};

class NotationExpr {
public:
    using Variant = std::variant<Simple, Span, Compound, Auxiliary, Relation, OpaqueKey>;

    NotationExpr() = default;
    template <typename T>
        requires std::is_constructible_v<Variant, T&&> &&
                 (!std::is_same_v<std::remove_cvref_t<T>, NotationExpr>)
    NotationExpr(T&& v) : value_(std::forward<T>(v)) {}

    const Variant& value() const noexcept { return value_; }
    Variant& value() noexcept { return value_; }

    template <typename T>
    bool is() const noexcept { return std::holds_alternative<T>(value_); }
    template <typename T>
    const T& as() const { return std::get<T>(value_); }
    template <typename T>
    const T* get_if() const noexcept { return std::get_if<T>(&value_); }

    friend bool operator==(const NotationExpr& a, const NotationExpr& b);

private:
    Variant value_;
};

bool operator==(const Relation& a, const Relation& b);

struct FacetDelimiters {
    std::string id;
    std::string open;   // exactly one character
    std::string close;  // zero or one character
};

// Delimiter table used by the parser. Delimiters must be unique.
class FacetRegistry {
public:
    FacetRegistry() = default;
    explicit FacetRegistry(std::vector<FacetDelimiters> facets);

    // Throws InvalidArgumentError on duplicate ids or delimiters.
    void add(FacetDelimiters facet);

    const FacetDelimiters* by_id(std::string_view id) const;
    const FacetDelimiters* by_open(char c) const;
    bool is_close(char c) const;
    const std::vector<FacetDelimiters>& facets() const noexcept { return facets_; }

private:
    std::vector<FacetDelimiters> facets_;
};

struct ParseOptions {
    // Accept text that is not an expressive classmark as an OpaqueKey.
    bool allow_opaque = false;
};

NotationExpr parse(std::string_view text, const FacetRegistry& facets = {}, ParseOptions options = {});

std::string format(const NotationExpr& expr);
std::string format_digits(std::string_view digits);

// Canonical text of `text`: format(parse(text)).
std::string canonicalize(std::string_view text, const FacetRegistry& facets = {}, ParseOptions options = {});

// Removes the last digit. nullopt is the root.
std::optional<Simple> broaden(const Simple& s);
// Throws UnsupportedVariantError unless `expr` is Simple.
std::optional<Simple> broaden(const NotationExpr& expr);

// One step up for any variant: Simple drops a digit, Compound drops its last
// auxiliary, Span becomes its shared prefix, Auxiliary drops a digit.
// Relations and opaque keys go straight to the root.
std::optional<NotationExpr> broaden_any(const NotationExpr& expr);

bool is_descendant(const Simple& ancestor, const Simple& candidate);
bool span_covers(const Span& span, const Simple& candidate);

struct Component {
    std::string kind;       // "main" or the facet id
    std::string digits;     // digit string; "left/right" for spans; key for opaque
    std::string canonical;  // standalone canonical text of the component
    friend bool operator==(const Component&, const Component&) = default;
};

std::vector<Component> decompose(const NotationExpr& expr);

// Filing order: main numbers before auxiliaries before opaque keys; digit
// strings compare as strings; a span sorts just before the simple class
// sharing its left endpoint.
bool notation_less(const NotationExpr& a, const NotationExpr& b);

// Span validity helpers exposed for callers that build spans by hand.
bool is_digit_string(std::string_view s);
bool valid_span(const Span& s);

}  // namespace classweave
