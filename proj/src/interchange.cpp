#include "classweave/interchange.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "classweave/errors.hpp"

namespace classweave {

const char* exactness_name(Exactness e) {
    switch (e) {
        case Exactness::exact: return "exact";
        case Exactness::broader: return "broader";
        case Exactness::narrower: return "narrower";
    }
    return "exact";
}

std::optional<Exactness> exactness_from_name(std::string_view name) {
    if (name == "exact") return Exactness::exact;
    if (name == "broader") return Exactness::broader;
    if (name == "narrower") return Exactness::narrower;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Concordance

namespace {

std::string map_key(std::string_view src, std::string_view tgt, std::string_view notation) {
    std::string k(src);
    k += '\t';
    k += tgt;
    k += '\t';
    k += notation;
    return k;
}

}  // namespace

bool Concordance::add(ConcordanceEntry entry) {
    auto key = map_key(entry.source_scheme, entry.target_scheme, entry.source_notation);
    if (index_.count(key)) return false;
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(entry));
    return true;
}

Translation Concordance::translate(std::string_view source_scheme, std::string_view notation,
                                   std::string_view target_scheme, const FacetRegistry& source_facets,
                                   ParseOptions options) const {
    const bool known = std::any_of(entries_.begin(), entries_.end(), [&](const ConcordanceEntry& e) {
        return e.source_scheme == source_scheme && e.target_scheme == target_scheme;
    });
    if (!known) {
        throw NotFoundError("no concordance from " + std::string(source_scheme) + " to " + std::string(target_scheme));
    }
    Translation out;
    std::optional<NotationExpr> expr = parse(notation, source_facets, options);
    while (expr) {
        auto it = index_.find(map_key(source_scheme, target_scheme, format(*expr)));
        if (it != index_.end()) {
            const auto& e = entries_[it->second];
            out.target_notation = e.target_notation;
            out.exactness = out.hops_broadened == 0 ? e.exactness : Exactness::broader;
            return out;
        }
        expr = broaden_any(*expr);
        ++out.hops_broadened;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reading

std::shared_ptr<const Scheme> Catalog::scheme(std::string_view id) const {
    auto it = schemes.find(std::string(id));
    return it == schemes.end() ? nullptr : it->second;
}

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

std::string strip_dots(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), '.'), s.end());
    return s;
}

std::vector<std::string> split_classmarks(const std::string& field) {
    std::vector<std::string> out;
    std::stringstream ss(field);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto b = item.find_first_not_of(" ");
        auto e = item.find_last_not_of(" ");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

struct PendingMap {
    ConcordanceEntry entry;
    Origin at;
};

struct Reader {
    std::map<std::string, SchemeBuilder> builders;
    std::vector<std::string> order;
    std::vector<PendingMap> maps;
    std::vector<ClassifiedDocument> documents;
    std::vector<Diagnostic> diagnostics;
    bool fatal = false;
    bool documents_only = false;

    void diag(const Origin& at, std::string msg, bool is_fatal = false) {
        diagnostics.push_back({at.file, at.line, std::move(msg), is_fatal});
        fatal = fatal || is_fatal;
    }

    void read(std::string_view name, std::string_view text) {
        SchemeBuilder* current = nullptr;
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            std::string_view line =
                text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.empty() || line.front() == '#') continue;
            if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
            record(Origin{std::string(name), lineno}, split_tabs(line), current);
        }
    }

    bool arity(const Origin& at, const std::vector<std::string>& f, std::size_t lo, std::size_t hi) {
        if (f.size() < lo || f.size() > hi) {
            diag(at, f[0] + " record expects " + std::to_string(lo - 1) +
                         (hi != lo ? "-" + std::to_string(hi - 1) : std::string()) + " fields, got " +
                         std::to_string(f.size() - 1));
            return false;
        }
        return true;
    }

    void record(const Origin& at, const std::vector<std::string>& f, SchemeBuilder*& current) {
        const std::string& tag = f[0];
        if (tag == "D") {
            if (!arity(at, f, 5, 5)) return;
            documents.push_back({f[1], f[4], f[2], split_classmarks(f[3])});
            return;
        }
        if (documents_only) {
            diag(at, "unexpected " + tag + " record in a document file");
            return;
        }
        if (tag == "SCHEME") {
            if (!arity(at, f, 2, 5)) return;
            auto [it, fresh] = builders.try_emplace(f[1], f[1]);
            if (fresh) order.push_back(f[1]);
            current = &it->second;
            if (f.size() > 2 && !f[2].empty()) current->set_title(f[2]);
            if (f.size() > 3 && !f[3].empty()) {
                if (f[3] == "notational") {
                    current->set_mode(HierarchyMode::notational);
                } else if (f[3] == "explicit") {
                    current->set_mode(HierarchyMode::explicit_links);
                } else {
                    diag(at, "unknown hierarchy mode '" + f[3] + "'");
                }
            }
            if (f.size() > 4 && !f[4].empty()) current->set_default_lang(f[4]);
            return;
        }
        if (tag == "MAP") {
            if (!arity(at, f, 6, 6)) return;
            auto ex = exactness_from_name(f[5]);
            if (!ex) {
                diag(at, "unknown exactness '" + f[5] + "'");
                return;
            }
            maps.push_back({{f[1], f[2], f[3], f[4], *ex}, at});
            return;
        }
        static const std::set<std::string> scheme_tags = {"C",   "P",   "SA", "T",   "DISC",
                                                          "SYS", "AUX", "A",  "ADD", "FF"};
        if (!scheme_tags.count(tag)) {
            diag(at, "unknown record type '" + tag + "'");
            return;
        }
        if (!current) {
            diag(at, tag + " record before any SCHEME record");
            return;
        }
        SchemeBuilder& b = *current;
        if (tag == "C") {
            if (arity(at, f, 4, 4)) b.add_caption(f[1], f[2], f[3], at);
        } else if (tag == "P") {
            if (arity(at, f, 3, 3)) b.add_parent(f[1], f[2], at);
        } else if (tag == "SA") {
            if (arity(at, f, 3, 3)) b.add_see_also(f[1], f[2], at);
        } else if (tag == "T") {
            if (arity(at, f, 4, 4)) b.add_term(f[1], f[2], f[3], at);
        } else if (tag == "DISC") {
            if (arity(at, f, 2, 3)) b.set_discipline(f[1], f.size() > 2 ? f[2] : std::string(), at);
        } else if (tag == "SYS") {
            if (arity(at, f, 3, 3)) b.set_system_no(f[1], f[2], at);
        } else if (tag == "AUX") {
            if (arity(at, f, 3, 4)) b.add_facet(f[1], f[2], f.size() > 3 ? f[3] : std::string(), at);
        } else if (tag == "A") {
            if (arity(at, f, 5, 5)) b.add_aux_caption(f[1], f[2], f[3], f[4], at);
        } else if (tag == "ADD") {
            if (arity(at, f, 5, 5)) {
                b.add_instruction({strip_dots(f[1]), strip_dots(f[2]), strip_dots(f[3]), strip_dots(f[4])}, at);
            }
        } else if (tag == "FF") {
            if (!arity(at, f, 4, 4)) return;
            Marker m;
            if (!marker_from_name(f[3], m)) {
                diag(at, "unknown facet marker '" + f[3] + "'");
                return;
            }
            b.add_formula_slot(f[1], {f[2], m}, at);
        }
    }

    Catalog finish() {
        Catalog out;
        for (const auto& id : order) {
            auto result = builders.at(id).build();
            for (auto& d : result.diagnostics) diag({d.file, d.line}, d.message, d.fatal);
            out.schemes.emplace(id, std::shared_ptr<const Scheme>(std::move(result.scheme)));
            out.scheme_order.push_back(id);
        }
        for (auto& m : maps) {
            auto canon = [&](const std::string& scheme_id, const std::string& text) -> std::optional<std::string> {
                try {
                    if (auto s = out.scheme(scheme_id)) return s->canonicalize(text);
                    return canonicalize(text, {}, {true});
                } catch (const ParseError& e) {
                    diag(m.at, "malformed notation '" + text + "': " + e.what());
                    return std::nullopt;
                }
            };
            auto src = canon(m.entry.source_scheme, m.entry.source_notation);
            auto tgt = canon(m.entry.target_scheme, m.entry.target_notation);
            if (!src || !tgt) continue;
            m.entry.source_notation = *src;
            m.entry.target_notation = *tgt;
            if (!out.concordance.add(m.entry)) {
                diag(m.at,
                     "duplicate mapping " + m.entry.source_scheme + " " + *src + " -> " + m.entry.target_scheme, true);
            }
        }
        out.documents = std::move(documents);
        out.diagnostics = std::move(diagnostics);
        out.fatal = fatal;
        return out;
    }
};

bool slurp(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

}  // namespace

Catalog load_catalog_text(const std::vector<SourceText>& sources) {
    Reader r;
    for (const auto& s : sources) r.read(s.name, s.text);
    return r.finish();
}

Catalog load_catalog(const std::vector<std::string>& paths) {
    Reader r;
    for (const auto& p : paths) {
        std::string text;
        if (!slurp(p, text)) {
            r.diag({p, 0}, "cannot read file", true);
            continue;
        }
        r.read(p, text);
    }
    return r.finish();
}

SchemeLoad load_scheme(const std::string& path) {
    Catalog c = load_catalog({path});
    SchemeLoad out;
    out.diagnostics = std::move(c.diagnostics);
    out.fatal = c.fatal;
    if (c.scheme_order.size() != 1) {
        out.diagnostics.push_back({path, 0, "expected exactly one SCHEME record, found " +
                                                std::to_string(c.scheme_order.size()), true});
        out.fatal = true;
        return out;
    }
    out.scheme = c.schemes.begin()->second;
    return out;
}

std::vector<ClassifiedDocument> read_documents(std::string_view text, std::string_view name,
                                               std::vector<Diagnostic>& diagnostics) {
    Reader r;
    r.documents_only = true;
    r.read(name, text);
    diagnostics.insert(diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
    return std::move(r.documents);
}

// ---------------------------------------------------------------------------
// Writing

std::string write_scheme(const Scheme& scheme) {
    std::ostringstream out;
    out << "SCHEME\t" << scheme.id() << '\t' << scheme.title() << '\t'
        << (scheme.mode() == HierarchyMode::notational ? "notational" : "explicit") << '\t' << scheme.default_lang()
        << '\n';
    for (const auto& f : scheme.aux_facets()) {
        out << "AUX\t" << f.facet_id << '\t' << f.open_delim << '\t' << f.close_delim << '\n';
    }
    for (const ClassRecord* rec : scheme.classes()) {
        for (const auto& [lang, text] : rec->captions) {
            if (const auto* a = rec->expr.get_if<Auxiliary>()) {
                out << "A\t" << rec->facet << '\t' << format_digits(a->digits) << '\t' << lang << '\t' << text << '\n';
            } else {
                out << "C\t" << rec->notation << '\t' << lang << '\t' << text << '\n';
            }
        }
    }
    for (const ClassRecord* rec : scheme.classes()) {
        if (rec->parent) out << "P\t" << rec->notation << '\t' << *rec->parent << '\n';
        for (const auto& t : rec->see_also) out << "SA\t" << rec->notation << '\t' << t << '\n';
        for (const auto& [lang, terms] : rec->index_terms) {
            for (const auto& t : terms) out << "T\t" << rec->notation << '\t' << lang << '\t' << t << '\n';
        }
        if (rec->is_discipline) {
            out << "DISC\t" << rec->notation;
            if (!rec->discipline_label.empty()) out << '\t' << rec->discipline_label;
            out << '\n';
        }
        if (!rec->system_no.empty()) out << "SYS\t" << rec->notation << '\t' << rec->system_no << '\n';
    }
    for (const auto& a : scheme.add_instructions()) {
        out << "ADD\t" << a.base << '\t' << a.source_left << '\t' << a.source_right << '\t' << a.strip_prefix << '\n';
    }
    for (const auto& [name, formula] : scheme.facet_formulas()) {
        for (const auto& slot : formula.slots) {
            out << "FF\t" << name << '\t' << slot.name << '\t' << marker_name(slot.marker) << '\n';
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SKOS

std::string percent_encode(std::string_view text) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

std::string percent_decode(std::string_view text) {
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size() && val(text[i + 1]) >= 0 && val(text[i + 2]) >= 0) {
            out += static_cast<char>(val(text[i + 1]) * 16 + val(text[i + 2]));
            i += 2;
        } else {
            out += text[i];
        }
    }
    return out;
}

std::string concept_iri(const Scheme& scheme, std::string_view notation) {
    return "urn:kos:" + percent_encode(scheme.id()) + ":" + percent_encode(notation);
}

namespace {

constexpr const char* kType = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
constexpr const char* kSkos = "http://www.w3.org/2004/02/skos/core#";

std::string skos(const char* term) { return std::string("<") + kSkos + term + ">"; }

std::string literal(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

}  // namespace

std::string export_skos(const Scheme& scheme) {
    std::set<std::string> lines;
    auto iri = [&](std::string_view n) { return "<" + concept_iri(scheme, n) + ">"; };
    auto triple = [&](const std::string& s, const std::string& p, const std::string& o) {
        lines.insert(s + " " + p + " " + o + " .");
    };
    for (const ClassRecord* rec : scheme.classes()) {
        const std::string self = iri(rec->notation);
        triple(self, kType, skos("Concept"));
        triple(self, skos("notation"), literal(rec->notation));
        for (const auto& [lang, text] : rec->captions) triple(self, skos("prefLabel"), literal(text) + "@" + lang);
        for (const auto& [lang, terms] : rec->index_terms) {
            for (const auto& t : terms) triple(self, skos("altLabel"), literal(t) + "@" + lang);
        }
        if (auto p = scheme.parent_of(rec->notation)) {
            triple(self, skos("broader"), iri(*p));
            triple(iri(*p), skos("narrower"), self);
        }
        for (const auto& t : rec->see_also) {
            triple(self, skos("related"), iri(t));
            triple(iri(t), skos("related"), self);
        }
    }
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Authority records

std::string format_authority(const AuthorityRecord& record) {
    std::string out = "Notation\t" + record.notation + "\n";
    auto flag = [](bool fallback) { return fallback ? std::string("\tfallback") : std::string(); };
    for (const auto& t : record.terms) out += "Term\t" + t.text + "\t" + t.lang + flag(t.fallback) + "\n";
    auto links = [&](const char* field, const std::vector<AuthorityLink>& v) {
        for (const auto& l : v) {
            out += std::string(field) + "\t" + l.text + " : " + l.notation + "\t" + l.lang + flag(l.fallback) + "\n";
        }
    };
    links("Broader term", record.broader);
    links("Narrower term", record.narrower);
    links("Related term", record.related);
    if (!record.system_no.empty()) out += "System No\t" + record.system_no + "\n";
    return out;
}

AuthorityExport export_authority(const Scheme& scheme, const std::vector<std::string>& notations,
                                 const std::vector<std::string>& langs) {
    AuthorityExport out;
    bool first = true;
    for (const auto& n : notations) {
        try {
            auto rec = scheme.authority_record(n, langs);
            if (!first) out.text += "\n";
            out.text += format_authority(rec);
            first = false;
        } catch (const Error& e) {
            out.diagnostics.push_back(n + ": " + e.what());
        }
    }
    return out;
}

}  // namespace classweave
