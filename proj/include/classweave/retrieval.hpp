#pragma once
// Classified-document store and the searches it supports: term search with
// hierarchical hit displays, browse, explode, broaden, syndetic expansion and
// term-matching class suggestion.
//
// Every classmark is decomposed and the document is posted under each
// component (main numbers, auxiliaries, relation operands). A component that
// is not itself a stored class is anchored at its nearest stored ancestor, so
// counts always land on a class the scheme can display.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "classweave/notation.hpp"
#include "classweave/scheme.hpp"

namespace classweave {

struct ClassifiedDocument {
    std::string doc_id;
    std::string title;
    std::string language;
    std::vector<std::string> classmarks;  // classmark text as supplied
};

struct Rejection {
    std::string doc_id;
    std::string reason;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<Rejection> rejected;
};

enum class RowRole { broader, match, narrower };
const char* role_name(RowRole r);

struct HitRow {
    std::string notation;
    std::string caption;
    std::size_t direct_hits = 0;
    std::size_t aggregate_hits = 0;
    std::string context;  // discipline label, groups rows by perspective
    RowRole role = RowRole::match;
};

struct BrowseView {
    std::optional<HitRow> parent;  // absent at the top level
    HitRow self;
    std::vector<HitRow> children;
    bool aggregate = false;
};

struct BroadenResult {
    std::optional<std::string> notation;  // nullopt is the root
    std::size_t hits = 0;
};

struct RelatedRow {
    std::string notation;
    std::string caption;
    std::size_t direct_hits = 0;
};

struct Suggestion {
    std::string notation;
    int score = 0;
};

// Immutable view of the store. Queries hold a shared_ptr to one of these, so
// an ingest running in parallel never changes what a query sees.
struct StoreSnapshot {
    std::vector<ClassifiedDocument> documents;
    std::map<std::string, std::size_t> by_id;
    std::vector<std::vector<Component>> components;     // per document
    std::map<std::string, std::set<std::size_t>> postings;   // component key -> docs
    std::map<std::string, std::set<std::size_t>> anchored;   // stored class -> docs
    std::map<std::string, std::size_t> aggregate;            // stored class -> subtree count
};

class Collection {
public:
    explicit Collection(std::shared_ptr<const Scheme> scheme);

    const Scheme& scheme() const noexcept { return *scheme_; }
    std::shared_ptr<const StoreSnapshot> snapshot() const;

    // Single writer. Builds a new snapshot and swaps it in when complete.
    IngestReport ingest(const std::vector<ClassifiedDocument>& documents);

    std::size_t size() const { return snapshot()->documents.size(); }
    std::size_t direct_hits(std::string_view notation) const;
    std::size_t aggregate_hits(std::string_view notation) const;

    std::vector<HitRow> search_term(std::string_view query, std::string_view lang) const;
    // Empty notation browses the top level.
    BrowseView browse(std::string_view notation, bool aggregate, std::string_view lang) const;
    std::set<std::string> explode(std::string_view notation) const;
    BroadenResult broaden_until(std::string_view notation, std::size_t min_hits) const;
    std::vector<RelatedRow> syndetic_expand(std::string_view notation, std::string_view lang) const;
    std::vector<Suggestion> suggest_classes(std::string_view text, std::size_t top_k, std::string_view lang) const;

    // Documents posted under `key` (a canonical component), exact match only.
    std::set<std::string> posted_under(std::string_view key) const;

private:
    std::set<std::size_t> explode_ids(const StoreSnapshot& snap, const NotationExpr& expr) const;
    HitRow row(const StoreSnapshot& snap, const ClassRecord& rec, std::string_view lang, RowRole role) const;
    std::optional<std::string> anchor_of(const NotationExpr& component) const;

    std::shared_ptr<const Scheme> scheme_;
    std::mutex writer_;
    mutable std::mutex mutex_;
    std::shared_ptr<const StoreSnapshot> snapshot_;
};

// Lowercased words of `text`, split on whitespace and punctuation.
std::vector<std::string> tokenize_words(std::string_view text);

}  // namespace classweave
