#include "classweave/indexes.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "classweave/errors.hpp"

namespace classweave {

const char* match_name(MatchKind k) {
    switch (k) {
        case MatchKind::exact: return "exact";
        case MatchKind::prefix: return "prefix";
        case MatchKind::substring: return "substring";
    }
    return "?";
}

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

namespace {

bool word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Caption (if present in `lang`) and index terms of `rec`, without repeats.
std::vector<std::string> terms_of(const ClassRecord& rec, std::string_view lang) {
    std::vector<std::string> out;
    auto add = [&](const std::string& t) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    };
    auto collect = [&](const std::string& l) {
        if (auto it = rec.captions.find(l); it != rec.captions.end()) add(it->second);
        if (auto it = rec.index_terms.find(l); it != rec.index_terms.end())
            for (const auto& t : it->second) add(t);
    };
    if (lang.empty()) {
        std::set<std::string> langs;
        for (const auto& [l, _] : rec.captions) langs.insert(l);
        for (const auto& [l, _] : rec.index_terms) langs.insert(l);
        for (const auto& l : langs) collect(l);
    } else {
        collect(std::string(lang));
    }
    return out;
}

// Position of each class in filing order, for stable tie-breaks.
std::map<std::string, std::size_t> filing_rank(const Scheme& scheme) {
    std::map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < scheme.classes().size(); ++i) rank[scheme.classes()[i]->notation] = i;
    return rank;
}

}  // namespace

std::optional<MatchKind> match_term(std::string_view folded_query, std::string_view term) {
    if (folded_query.empty()) return std::nullopt;
    const std::string t = fold_case(term);
    if (t == folded_query) return MatchKind::exact;
    const auto pos = t.find(folded_query);
    if (pos == std::string::npos) return std::nullopt;
    if (pos == 0 && word_char(t[folded_query.size()])) return MatchKind::prefix;
    return MatchKind::substring;
}

std::vector<ListingEntry> alphabetical_listing(const Scheme& scheme, std::string_view lang) {
    const auto rank = filing_rank(scheme);
    std::vector<ListingEntry> out;
    for (const ClassRecord* rec : scheme.classes()) {
        for (auto& t : terms_of(*rec, lang)) out.push_back({std::move(t), rec->notation});
    }
    std::sort(out.begin(), out.end(), [&](const ListingEntry& a, const ListingEntry& b) {
        if (a.term != b.term) return a.term < b.term;
        return rank.at(a.notation) < rank.at(b.notation);
    });
    return out;
}

std::vector<ChainEntry> chain_index(const Scheme& scheme, std::string_view lang) {
    std::vector<ChainEntry> out;
    for (const ClassRecord* rec : scheme.classes()) {
        ChainEntry e{rec->notation, {scheme.caption(*rec, lang).text}};
        for (const ClassRecord* a : scheme.ancestors(*rec)) e.chain.push_back(scheme.caption(*a, lang).text);
        out.push_back(std::move(e));
    }
    return out;
}

RelativeIndex relative_index(const Scheme& scheme, std::string_view lang) {
    const auto rank = filing_rank(scheme);
    RelativeIndex index;
    for (const ClassRecord* rec : scheme.classes()) {
        const std::string context = scheme.context_label(*rec, lang);
        for (const auto& t : terms_of(*rec, lang)) index[t].push_back({context, rec->notation});
    }
    for (auto& [term, placements] : index) {
        std::sort(placements.begin(), placements.end(), [&](const Placement& a, const Placement& b) {
            if (a.context != b.context) return a.context < b.context;
            return rank.at(a.notation) < rank.at(b.notation);
        });
    }
    return index;
}

std::vector<TermMatch> lookup_term(const Scheme& scheme, std::string_view query, std::string_view lang) {
    const std::string q = fold_case(query);
    std::vector<std::pair<std::size_t, TermMatch>> hits;
    for (std::size_t i = 0; i < scheme.classes().size(); ++i) {
        const ClassRecord* rec = scheme.classes()[i];
        std::optional<TermMatch> best;
        for (const auto& t : terms_of(*rec, lang)) {
            auto kind = match_term(q, t);
            if (kind && (!best || *kind < best->kind)) best = TermMatch{rec->notation, t, *kind};
        }
        if (best) hits.emplace_back(i, std::move(*best));
    }
    std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second.kind, a.first) < std::tie(b.second.kind, b.first);
    });
    std::vector<TermMatch> out;
    for (auto& [_, m] : hits) out.push_back(std::move(m));
    return out;
}

namespace {

std::string tsv(std::vector<std::tuple<std::string, std::string, std::string>> rows) {
    std::sort(rows.begin(), rows.end());
    std::string out;
    for (const auto& [a, b, c] : rows) out += a + "\t" + b + "\t" + c + "\n";
    return out;
}

}  // namespace

std::string chain_index_tsv(const std::vector<ChainEntry>& entries) {
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (const auto& e : entries) {
        std::string context;
        for (std::size_t i = 1; i < e.chain.size(); ++i) {
            if (i > 1) context += " < ";
            context += e.chain[i];
        }
        rows.emplace_back(e.chain.empty() ? std::string() : e.chain.front(), context, e.notation);
    }
    return tsv(std::move(rows));
}

std::string relative_index_tsv(const RelativeIndex& index) {
    std::vector<std::tuple<std::string, std::string, std::string>> rows;
    for (const auto& [term, placements] : index)
        for (const auto& p : placements) rows.emplace_back(term, p.context, p.notation);
    return tsv(std::move(rows));
}

}  // namespace classweave
