#pragma once
// Word access to a scheme: alphabetical listing, chain index, relative index
// and the term lookup that retrieval builds on.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classweave/scheme.hpp"

namespace classweave {

struct ListingEntry {
    std::string term;
    std::string notation;
    friend bool operator==(const ListingEntry&, const ListingEntry&) = default;
};

struct ChainEntry {
    std::string notation;
    std::vector<std::string> chain;  // most specific first
};

struct Placement {
    std::string context;  // discipline label, empty for an unqualified placement
    std::string notation;
    friend bool operator==(const Placement&, const Placement&) = default;
};

using RelativeIndex = std::map<std::string, std::vector<Placement>>;

enum class MatchKind { exact = 0, prefix = 1, substring = 2 };
const char* match_name(MatchKind k);

struct TermMatch {
    std::string notation;
    std::string term;
    MatchKind kind;
};

// Lowercases ASCII letters; other bytes pass through.
std::string fold_case(std::string_view text);

// exact: term equals query; prefix: term starts with query and the word
// continues (Tepehua / Tepehuan); substring: any other occurrence.
std::optional<MatchKind> match_term(std::string_view folded_query, std::string_view term);

// Captions and index terms of every class in `lang`, codepoint order.
std::vector<ListingEntry> alphabetical_listing(const Scheme& scheme, std::string_view lang);

// One entry per class. Throws StructuralError on a parent cycle.
std::vector<ChainEntry> chain_index(const Scheme& scheme, std::string_view lang);

RelativeIndex relative_index(const Scheme& scheme, std::string_view lang);

// One row per class, best match kind first, then filing order. An empty
// `lang` searches every language.
std::vector<TermMatch> lookup_term(const Scheme& scheme, std::string_view query, std::string_view lang);

// Tab-separated exports: term, context, notation; sorted; LF endings.
std::string chain_index_tsv(const std::vector<ChainEntry>& entries);
std::string relative_index_tsv(const RelativeIndex& index);

}  // namespace classweave
