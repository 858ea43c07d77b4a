#pragma once
// Number building: common auxiliaries, relators, add-to-base instructions and
// facet-formula (citation order) notations.

#include <map>
#include <string>
#include <vector>

#include "classweave/notation.hpp"
#include "classweave/rules.hpp"
#include "classweave/scheme.hpp"

namespace classweave {

// Appends `aux` from facet `facet_id` to `main`, which must be a stored main
// class or a compound built on one. Throws NotFoundError for an unknown facet,
// auxiliary or main class and InvalidArgumentError if the facet is already
// present.
NotationExpr apply_auxiliary(const Scheme& scheme, const NotationExpr& main, const std::string& facet_id,
                             const std::string& aux_digits);

// Builds a flattened relation. Operands that are relations of the same
// relator are spliced in; a relation with the other relator may only lead.
NotationExpr relate(Relator op, const std::vector<NotationExpr>& operands);

// base ++ (source minus strip prefix). Throws OutOfSpanError or
// InvalidArgumentError (malformed source or instruction).
Simple expand_add(const AddInstruction& instr, const Simple& source);

// Finds the instruction of `scheme` with this base whose span holds `source`.
// Throws NotFoundError when none applies.
const AddInstruction& find_add_instruction(const Scheme& scheme, const std::string& base_digits,
                                           const Simple& source);

using FacetComponents = std::map<std::string, std::string>;

bool token_matches(Marker m, const std::string& token);

// Concatenates the supplied tokens in slot order. Throws InvalidArgumentError
// on unknown slots or tokens that do not fit their marker.
std::string synthesize_faceted(const FacetFormula& formula, const FacetComponents& components);

// Inverse of synthesize_faceted. Throws ParseError.
FacetComponents parse_faceted(const FacetFormula& formula, const std::string& text);

}  // namespace classweave
