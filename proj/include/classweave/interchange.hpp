#pragma once
// Flat-file formats: scheme source, documents and concordances (one
// tab-separated record per line), SKOS-style triples, authority records.
//
// Scheme source records (UTF-8, LF, '#' starts a comment line):
//   SCHEME  id  title  notational|explicit  default-lang
//   C       notation  lang  caption
//   P       notation  parent
//   SA      notation  target
//   T       notation  lang  term
//   DISC    notation  [context-label]
//   SYS     notation  system-number
//   AUX     facet-id  open  close
//   A       facet-id  notation  lang  caption
//   ADD     base  left  right  strip
//   FF      formula  slot  marker
//   MAP     src-scheme  src-notation  tgt-scheme  tgt-notation  exact|broader|narrower
//   D       doc-id  lang  classmark(;classmark)*  title
//
// Records that belong to a scheme attach to the most recent SCHEME line.
// Several files may declare the same scheme id; their records merge.

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classweave/retrieval.hpp"
#include "classweave/scheme.hpp"

namespace classweave {

enum class Exactness { exact, broader, narrower };
const char* exactness_name(Exactness e);
std::optional<Exactness> exactness_from_name(std::string_view name);

struct ConcordanceEntry {
    std::string source_scheme;
    std::string source_notation;
    std::string target_scheme;
    std::string target_notation;
    Exactness exactness = Exactness::exact;
};

struct Translation {
    std::optional<std::string> target_notation;  // nullopt: no mapping
    Exactness exactness = Exactness::exact;
    std::size_t hops_broadened = 0;
};

class Concordance {
public:
    // Returns false if (source scheme, source notation, target scheme) exists.
    bool add(ConcordanceEntry entry);
    const std::vector<ConcordanceEntry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    // Exact entry if present, otherwise broaden until an entry matches.
    // Throws NotFoundError when the concordance has no src -> tgt entries.
    Translation translate(std::string_view source_scheme, std::string_view notation, std::string_view target_scheme,
                          const FacetRegistry& source_facets = {}, ParseOptions options = {}) const;

private:
    std::vector<ConcordanceEntry> entries_;
    std::map<std::string, std::size_t> index_;  // "src\ttgt\tnotation"
};

struct Catalog {
    std::map<std::string, std::shared_ptr<const Scheme>> schemes;
    std::vector<std::string> scheme_order;  // declaration order
    Concordance concordance;
    std::vector<ClassifiedDocument> documents;
    std::vector<Diagnostic> diagnostics;
    bool fatal = false;

    std::shared_ptr<const Scheme> scheme(std::string_view id) const;
};

struct SourceText {
    std::string name;
    std::string text;
};

// Reads every record of every file, then builds the schemes. Missing files
// are fatal diagnostics.
Catalog load_catalog(const std::vector<std::string>& paths);
Catalog load_catalog_text(const std::vector<SourceText>& sources);

struct SchemeLoad {
    std::shared_ptr<const Scheme> scheme;
    std::vector<Diagnostic> diagnostics;
    bool fatal = false;
};

// Loads the single scheme declared in `path`.
SchemeLoad load_scheme(const std::string& path);

// Parses D lines only; any other record is a diagnostic.
std::vector<ClassifiedDocument> read_documents(std::string_view text, std::string_view name,
                                               std::vector<Diagnostic>& diagnostics);

// Writes `scheme` back in the source format.
std::string write_scheme(const Scheme& scheme);

// Percent-encodes every byte that is not an ASCII letter or digit.
std::string percent_encode(std::string_view text);
std::string percent_decode(std::string_view text);
std::string concept_iri(const Scheme& scheme, std::string_view notation);

// One triple per line, sorted, LF endings.
std::string export_skos(const Scheme& scheme);

struct AuthorityExport {
    std::string text;
    std::vector<std::string> diagnostics;
};

std::string format_authority(const AuthorityRecord& record);
AuthorityExport export_authority(const Scheme& scheme, const std::vector<std::string>& notations,
                                 const std::vector<std::string>& langs);

}  // namespace classweave
