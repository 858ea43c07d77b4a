#include "classweave/synthesis.hpp"

#include <algorithm>
#include <cctype>

#include "classweave/errors.hpp"

namespace classweave {

namespace {

std::string main_key(const NotationExpr& main) {
    if (const auto* c = main.get_if<Compound>()) {
        return std::visit([](const auto& m) { return format(NotationExpr(m)); }, c->main);
    }
    if (main.is<Simple>() || main.is<Span>()) return format(main);
    throw UnsupportedVariantError("auxiliaries attach to a main number, not " + format(main));
}

}  // namespace

NotationExpr apply_auxiliary(const Scheme& scheme, const NotationExpr& main, const std::string& facet_id,
                             const std::string& aux_digits) {
    const FacetDelimiters* facet = scheme.facets().by_id(facet_id);
    if (!facet) throw NotFoundError("scheme " + scheme.id() + " has no facet '" + facet_id + "'");

    NotationExpr aux_expr;
    try {
        aux_expr = parse(facet->open + aux_digits + facet->close, scheme.facets());
    } catch (const ParseError& e) {
        throw InvalidArgumentError("malformed auxiliary '" + aux_digits + "': " + e.reason());
    }
    const auto* aux = aux_expr.get_if<Auxiliary>();
    if (!aux) throw InvalidArgumentError("malformed auxiliary '" + aux_digits + "'");
    const std::string aux_key = format(aux_expr);
    const ClassRecord* table_entry = scheme.get_class(aux_key);
    if (!table_entry || table_entry->facet != facet_id) {
        throw NotFoundError("auxiliary " + aux_key + " is not in the " + facet_id + " table");
    }

    const std::string key = main_key(main);
    if (!scheme.get_class(key)) throw NotFoundError("no main class " + key + " in scheme " + scheme.id());

    Compound out;
    if (const auto* c = main.get_if<Compound>()) {
        out = *c;
    } else if (const auto* s = main.get_if<Simple>()) {
        out.main = *s;
    } else {
        out.main = main.as<Span>();
    }
    for (const auto& existing : out.auxiliaries) {
        if (existing.facet == facet_id) {
            throw InvalidArgumentError(format(main) + " already carries a " + facet_id + " auxiliary");
        }
    }
    out.auxiliaries.push_back(*aux);
    return NotationExpr(std::move(out));
}

NotationExpr relate(Relator op, const std::vector<NotationExpr>& operands) {
    if (operands.size() < 2) throw InvalidArgumentError("a relation needs at least two operands");
    Relation r{op, {}};
    for (std::size_t i = 0; i < operands.size(); ++i) {
        const auto* inner = operands[i].get_if<Relation>();
        if (inner && inner->op == op) {
            r.operands.insert(r.operands.end(), inner->operands.begin(), inner->operands.end());
        } else if (inner && i > 0) {
            throw InvalidArgumentError("a '" + std::string(1, static_cast<char>(inner->op)) +
                                       "' relation can only be the first operand of a '" +
                                       std::string(1, static_cast<char>(op)) + "' relation");
        } else {
            r.operands.push_back(operands[i]);
        }
    }
    return NotationExpr(std::move(r));
}

Simple expand_add(const AddInstruction& instr, const Simple& source) {
    if (!valid_span({instr.source_left, instr.source_right})) {
        throw InvalidArgumentError("add instruction has a malformed span " + instr.source_left + "-" +
                                   instr.source_right);
    }
    if (!is_digit_string(source.digits)) {
        throw InvalidArgumentError("malformed source " + format_digits(source.digits));
    }
    if (!span_covers({instr.source_left, instr.source_right}, source)) {
        throw OutOfSpanError("source " + format_digits(source.digits) + " is outside " +
                             format_digits(instr.source_left) + "-" + format_digits(instr.source_right));
    }
    if (source.digits.compare(0, instr.strip_prefix.size(), instr.strip_prefix) != 0) {
        throw InvalidArgumentError("malformed source " + format_digits(source.digits) + ": does not start with " +
                                   format_digits(instr.strip_prefix));
    }
    return Simple{instr.base + source.digits.substr(instr.strip_prefix.size())};
}

const AddInstruction& find_add_instruction(const Scheme& scheme, const std::string& base_digits,
                                           const Simple& source) {
    const AddInstruction* same_base = nullptr;
    for (const auto& instr : scheme.add_instructions()) {
        if (instr.base != base_digits) continue;
        same_base = &instr;
        if (span_covers({instr.source_left, instr.source_right}, source)) return instr;
    }
    if (same_base) return *same_base;  // expand_add reports why it does not apply
    throw NotFoundError("scheme " + scheme.id() + " has no add instruction for base " + format_digits(base_digits));
}

// ---------------------------------------------------------------------------
// Facet formulas
//
// Tokens are recognised by their first character and consumed greedily:
//   uppercase [A-Z]+   dash '-'[1-9]+   lowercase [a-z]+   zero-led '0'[0-9]*

namespace {

bool upper(char c) { return c >= 'A' && c <= 'Z'; }
bool lower(char c) { return c >= 'a' && c <= 'z'; }
bool nonzero(char c) { return c >= '1' && c <= '9'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

struct Token {
    Marker marker;
    std::string text;
    std::size_t offset;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t start = i;
        const char c = text[i];
        Marker m;
        if (upper(c)) {
            m = Marker::uppercase_letters;
            while (i < text.size() && upper(text[i])) ++i;
        } else if (lower(c)) {
            m = Marker::lowercase_letters;
            while (i < text.size() && lower(text[i])) ++i;
        } else if (c == '-') {
            m = Marker::dash_digits;
            ++i;
            if (i >= text.size() || !nonzero(text[i])) throw ParseError(start, "dash must be followed by digits 1-9");
            while (i < text.size() && nonzero(text[i])) ++i;
        } else if (c == '0') {
            m = Marker::zero_led_digits;
            while (i < text.size() && digit(text[i])) ++i;
        } else {
            throw ParseError(start, "no facet marker starts with '" + std::string(1, c) + "'");
        }
        out.push_back({m, text.substr(start, i - start), start});
    }
    return out;
}

}  // namespace

bool token_matches(Marker m, const std::string& token) {
    if (token.empty()) return false;
    switch (m) {
        case Marker::uppercase_letters: return std::all_of(token.begin(), token.end(), upper);
        case Marker::lowercase_letters: return std::all_of(token.begin(), token.end(), lower);
        case Marker::dash_digits:
            return token.size() >= 2 && token[0] == '-' && std::all_of(token.begin() + 1, token.end(), nonzero);
        case Marker::zero_led_digits: return token[0] == '0' && std::all_of(token.begin(), token.end(), digit);
    }
    return false;
}

std::string synthesize_faceted(const FacetFormula& formula, const FacetComponents& components) {
    if (auto why = formula.problem(); !why.empty()) throw InvalidArgumentError(why);
    for (const auto& [name, token] : components) {
        auto it = std::find_if(formula.slots.begin(), formula.slots.end(),
                               [&](const FacetSlot& s) { return s.name == name; });
        if (it == formula.slots.end()) {
            throw InvalidArgumentError("formula '" + formula.name + "' has no slot '" + name + "'");
        }
        if (!token_matches(it->marker, token)) {
            throw InvalidArgumentError("token '" + token + "' does not fit slot " + name + " (" +
                                       marker_name(it->marker) + ")");
        }
    }
    std::string out;
    for (const auto& slot : formula.slots) {
        if (auto it = components.find(slot.name); it != components.end()) out += it->second;
    }
    return out;
}

FacetComponents parse_faceted(const FacetFormula& formula, const std::string& text) {
    if (auto why = formula.problem(); !why.empty()) throw InvalidArgumentError(why);
    if (text.empty()) throw ParseError(0, "empty facet notation");
    FacetComponents out;
    std::size_t next_slot = 0;
    for (const Token& t : tokenize(text)) {
        std::size_t s = next_slot;
        while (s < formula.slots.size() && formula.slots[s].marker != t.marker) ++s;
        if (s == formula.slots.size()) {
            const bool known = std::any_of(formula.slots.begin(), formula.slots.end(),
                                           [&](const FacetSlot& f) { return f.marker == t.marker; });
            throw ParseError(t.offset, known ? "'" + t.text + "' violates the citation order"
                                             : "'" + t.text + "' fits no slot of formula '" + formula.name + "'");
        }
        out.emplace(formula.slots[s].name, t.text);
        next_slot = s + 1;
    }
    return out;
}

}  // namespace classweave
