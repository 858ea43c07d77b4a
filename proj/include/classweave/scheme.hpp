#pragma once
// In-memory model of a classification scheme.
//
// A Scheme is immutable once built; every const member is safe to call from
// several threads. Build one with SchemeBuilder, which validates references
// and reports problems as line-numbered diagnostics.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "classweave/notation.hpp"
#include "classweave/rules.hpp"

namespace classweave {

enum class HierarchyMode { notational, explicit_links };

enum class ClassKind { simple, span, compound, auxiliary, opaque };

const char* kind_name(ClassKind k);
const char* mode_name(HierarchyMode m);

struct ClassRecord {
    std::string notation;  // canonical, the identity key
    NotationExpr expr;
    ClassKind kind = ClassKind::simple;
    std::string facet;  // facet id for auxiliary-table entries
    std::map<std::string, std::string> captions;
    std::map<std::string, std::vector<std::string>> index_terms;
    std::optional<std::string> parent;  // stored link, overrides notational ancestry
    std::vector<std::string> see_also;
    bool is_discipline = false;
    std::string discipline_label;  // context label; caption when empty
    std::string system_no;
};

struct AuxFacet {
    std::string facet_id;
    std::string open_delim;
    std::string close_delim;
    std::vector<std::string> classes;  // canonical keys, filing order
};

struct Label {
    std::string lang;
    std::string text;
    bool fallback = false;  // text comes from another language
};

struct AuthorityLink {
    std::string lang;
    std::string text;
    std::string notation;
    bool fallback = false;
};

struct AuthorityRecord {
    std::string scheme_id;
    std::string notation;
    std::vector<Label> terms;
    std::vector<AuthorityLink> broader;
    std::vector<AuthorityLink> narrower;
    std::vector<AuthorityLink> related;
    std::string system_no;
};

struct SeeAlso {
    std::string notation;
    std::string caption;
};

struct Diagnostic {
    std::string file;
    std::size_t line = 0;
    std::string message;
    bool fatal = false;

    std::string to_string() const;
};

class Scheme {
public:
    Scheme(const Scheme&) = delete;
    Scheme& operator=(const Scheme&) = delete;

    const std::string& id() const noexcept { return id_; }
    const std::string& title() const noexcept { return title_; }
    HierarchyMode mode() const noexcept { return mode_; }
    const std::string& default_lang() const noexcept { return default_lang_; }
    const FacetRegistry& facets() const noexcept { return registry_; }
    const std::vector<AuxFacet>& aux_facets() const noexcept { return aux_facets_; }
    const std::vector<AddInstruction>& add_instructions() const noexcept { return add_instructions_; }
    const std::map<std::string, FacetFormula>& facet_formulas() const noexcept { return formulas_; }

    ParseOptions parse_options() const { return {mode_ == HierarchyMode::explicit_links}; }
    NotationExpr parse(std::string_view text) const;
    std::string canonicalize(std::string_view text) const;

    // Every record, main table and auxiliary tables, in filing order.
    const std::vector<const ClassRecord*>& classes() const noexcept { return ordered_; }
    std::size_t size() const noexcept { return records_.size(); }
    std::vector<std::string> languages() const;

    // Returns nullptr when absent. Throws ParseError on malformed text.
    const ClassRecord* get_class(std::string_view notation) const;
    // Throws NotFoundError when absent.
    const ClassRecord& require_class(std::string_view notation) const;

    // nullopt is the root.
    std::optional<std::string> parent_of(std::string_view notation) const;
    // Pass an empty string for the top level.
    std::vector<const ClassRecord*> children_of(std::string_view notation) const;
    std::vector<SeeAlso> see_also_of(std::string_view notation) const;
    AuthorityRecord authority_record(std::string_view notation, const std::vector<std::string>& langs) const;

    // Parent walk from a stored class, nearest first, excluding the class.
    std::vector<const ClassRecord*> ancestors(const ClassRecord& rec) const;

    Label caption(const ClassRecord& rec, std::string_view lang) const;
    // Label of the nearest discipline at or above `rec`, empty when none.
    std::string context_label(const ClassRecord& rec, std::string_view lang) const;

private:
    friend class SchemeBuilder;
    Scheme() = default;
    void finalize();
    const ClassRecord* find_key(const std::string& key) const;

    std::string id_;
    std::string title_;
    HierarchyMode mode_ = HierarchyMode::notational;
    std::string default_lang_ = "en";
    FacetRegistry registry_;
    std::vector<AuxFacet> aux_facets_;
    std::vector<AddInstruction> add_instructions_;
    std::map<std::string, FacetFormula> formulas_;

    std::map<std::string, ClassRecord> records_;
    std::map<std::string, std::optional<std::string>> resolved_parent_;
    std::map<std::string, std::vector<const ClassRecord*>> children_;  // "" is the root
    std::vector<const ClassRecord*> ordered_;
};

// Where a builder call came from, for diagnostics.
struct Origin {
    std::string file;
    std::size_t line = 0;
};

class SchemeBuilder {
public:
    explicit SchemeBuilder(std::string id, std::string title = {},
                           HierarchyMode mode = HierarchyMode::notational, std::string default_lang = "en");

    void set_title(std::string title) { title_ = std::move(title); }
    void set_mode(HierarchyMode mode) { mode_ = mode; }
    void set_default_lang(std::string lang) { default_lang_ = std::move(lang); }
    const std::string& id() const noexcept { return id_; }

    void add_facet(std::string facet_id, std::string open, std::string close, Origin at = {});
    void add_caption(std::string notation, std::string lang, std::string caption, Origin at = {});
    // `digits` is the bare auxiliary number, e.g. "469" for "(469)".
    void add_aux_caption(std::string facet_id, std::string digits, std::string lang, std::string caption,
                         Origin at = {});
    void add_parent(std::string notation, std::string parent, Origin at = {});
    void add_see_also(std::string notation, std::string target, Origin at = {});
    void add_term(std::string notation, std::string lang, std::string term, Origin at = {});
    void set_discipline(std::string notation, std::string label = {}, Origin at = {});
    void set_system_no(std::string notation, std::string number, Origin at = {});
    void add_instruction(AddInstruction instr, Origin at = {});
    void add_formula_slot(std::string formula, FacetSlot slot, Origin at = {});

    struct Result {
        std::unique_ptr<Scheme> scheme;
        std::vector<Diagnostic> diagnostics;
        bool fatal = false;
    };

    // Validates everything; broken links are dropped and reported. Duplicate
    // keys are fatal.
    Result build() const;

    // Skips reference and cycle validation. Tooling and tests only.
    std::unique_ptr<Scheme> build_unvalidated() const;

private:
    enum class Op { facet, caption, aux_caption, parent, see_also, term, discipline, system_no, instruction, slot };
    struct Entry {
        Op op;
        std::vector<std::string> args;
        Origin at;
        AddInstruction instr{};
        FacetSlot slot{};
    };

    Result assemble(bool validate) const;

    std::string id_;
    std::string title_;
    HierarchyMode mode_;
    std::string default_lang_;
    std::vector<Entry> entries_;
};

}  // namespace classweave
