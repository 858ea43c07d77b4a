#include "classweave/scheme.hpp"

#include <algorithm>
#include <set>

#include "classweave/errors.hpp"

namespace classweave {

const char* kind_name(ClassKind k) {
    switch (k) {
        case ClassKind::simple: return "simple";
        case ClassKind::span: return "span";
        case ClassKind::compound: return "compound";
        case ClassKind::auxiliary: return "auxiliary";
        case ClassKind::opaque: return "opaque";
    }
    return "?";
}

const char* mode_name(HierarchyMode m) {
    return m == HierarchyMode::notational ? "notational" : "explicit";
}

std::string Diagnostic::to_string() const {
    std::string out = file.empty() ? std::string("<input>") : file;
    if (line) out += ":" + std::to_string(line);
    out += fatal ? ": error: " : ": warning: ";
    return out + message;
}

namespace {

ClassKind kind_of(const NotationExpr& e) {
    if (e.is<Simple>()) return ClassKind::simple;
    if (e.is<Span>()) return ClassKind::span;
    if (e.is<Auxiliary>()) return ClassKind::auxiliary;
    if (e.is<OpaqueKey>()) return ClassKind::opaque;
    return ClassKind::compound;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scheme

NotationExpr Scheme::parse(std::string_view text) const {
    return classweave::parse(text, registry_, parse_options());
}

std::string Scheme::canonicalize(std::string_view text) const { return format(parse(text)); }

std::vector<std::string> Scheme::languages() const {
    std::set<std::string> langs;
    for (const auto& [key, rec] : records_)
        for (const auto& [lang, text] : rec.captions) langs.insert(lang);
    return {langs.begin(), langs.end()};
}

const ClassRecord* Scheme::find_key(const std::string& key) const {
    auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
}

const ClassRecord* Scheme::get_class(std::string_view notation) const {
    return find_key(canonicalize(notation));
}

const ClassRecord& Scheme::require_class(std::string_view notation) const {
    const std::string key = canonicalize(notation);
    if (const auto* rec = find_key(key)) return *rec;
    throw NotFoundError("no class " + key + " in scheme " + id_);
}

std::optional<std::string> Scheme::parent_of(std::string_view notation) const {
    const NotationExpr expr = parse(notation);
    const std::string key = format(expr);
    if (auto it = resolved_parent_.find(key); it != resolved_parent_.end()) return it->second;
    if (mode_ == HierarchyMode::explicit_links) return std::nullopt;
    for (auto up = broaden_any(expr); up; up = broaden_any(*up)) {
        std::string k = format(*up);
        if (records_.count(k)) return k;
    }
    return std::nullopt;
}

std::vector<const ClassRecord*> Scheme::children_of(std::string_view notation) const {
    const std::string key = notation.empty() ? std::string() : canonicalize(notation);
    auto it = children_.find(key);
    if (it == children_.end()) return {};
    return it->second;
}

std::vector<SeeAlso> Scheme::see_also_of(std::string_view notation) const {
    const ClassRecord& rec = require_class(notation);
    std::vector<SeeAlso> out;
    for (const auto& target : rec.see_also) {
        const ClassRecord* t = find_key(target);
        out.push_back({target, t ? caption(*t, default_lang_).text : std::string()});
    }
    return out;
}

std::vector<const ClassRecord*> Scheme::ancestors(const ClassRecord& rec) const {
    std::vector<const ClassRecord*> out;
    std::vector<std::string> seen{rec.notation};
    auto it = resolved_parent_.find(rec.notation);
    while (it != resolved_parent_.end() && it->second) {
        const std::string& up = *it->second;
        if (std::find(seen.begin(), seen.end(), up) != seen.end()) {
            std::string cycle;
            for (const auto& s : seen) cycle += s + " -> ";
            throw StructuralError("parent cycle: " + cycle + up);
        }
        seen.push_back(up);
        const ClassRecord* p = find_key(up);
        if (!p) break;
        out.push_back(p);
        it = resolved_parent_.find(up);
    }
    return out;
}

Label Scheme::caption(const ClassRecord& rec, std::string_view lang) const {
    if (auto it = rec.captions.find(std::string(lang)); it != rec.captions.end()) {
        return {it->first, it->second, false};
    }
    if (auto it = rec.captions.find(default_lang_); it != rec.captions.end()) {
        return {it->first, it->second, true};
    }
    if (!rec.captions.empty()) return {rec.captions.begin()->first, rec.captions.begin()->second, true};
    return {std::string(lang), {}, true};
}

std::string Scheme::context_label(const ClassRecord& rec, std::string_view lang) const {
    auto label = [&](const ClassRecord& r) {
        return r.discipline_label.empty() ? caption(r, lang).text : r.discipline_label;
    };
    if (rec.is_discipline) return label(rec);
    for (const ClassRecord* a : ancestors(rec)) {
        if (a->is_discipline) return label(*a);
    }
    return {};
}

AuthorityRecord Scheme::authority_record(std::string_view notation, const std::vector<std::string>& langs) const {
    const ClassRecord& rec = require_class(notation);
    const auto known = languages();
    for (const auto& l : langs) {
        if (std::find(known.begin(), known.end(), l) == known.end()) {
            throw InvalidArgumentError("scheme " + id_ + " has no captions in language '" + l + "'");
        }
    }
    AuthorityRecord out;
    out.scheme_id = id_;
    out.notation = rec.notation;
    out.system_no = rec.system_no;
    auto links = [&](const ClassRecord& target, std::vector<AuthorityLink>& into) {
        for (const auto& l : langs) {
            Label c = caption(target, l);
            into.push_back({l, c.text, target.notation, c.fallback});
        }
    };
    for (const auto& l : langs) {
        Label c = caption(rec, l);
        c.lang = l;
        out.terms.push_back(std::move(c));
    }
    if (auto p = resolved_parent_.at(rec.notation)) {
        if (const ClassRecord* pr = find_key(*p)) links(*pr, out.broader);
    }
    for (const ClassRecord* child : children_of(rec.notation)) links(*child, out.narrower);
    std::vector<const ClassRecord*> related;
    for (const auto& target : rec.see_also) {
        if (const ClassRecord* t = find_key(target)) related.push_back(t);
    }
    for (const ClassRecord* other : ordered_) {
        const auto& sa = other->see_also;
        if (std::find(sa.begin(), sa.end(), rec.notation) == sa.end()) continue;
        if (std::find(related.begin(), related.end(), other) == related.end()) related.push_back(other);
    }
    for (const ClassRecord* t : related) links(*t, out.related);
    return out;
}

void Scheme::finalize() {
    ordered_.clear();
    resolved_parent_.clear();
    children_.clear();
    for (const auto& [key, rec] : records_) ordered_.push_back(&rec);
    std::stable_sort(ordered_.begin(), ordered_.end(),
                     [](const ClassRecord* a, const ClassRecord* b) { return notation_less(a->expr, b->expr); });

    for (const ClassRecord* rec : ordered_) {
        std::optional<std::string> parent;
        if (rec->parent) {
            parent = rec->parent;
        } else if (mode_ == HierarchyMode::notational) {
            for (auto up = broaden_any(rec->expr); up; up = broaden_any(*up)) {
                std::string k = format(*up);
                if (records_.count(k)) {
                    parent = std::move(k);
                    break;
                }
            }
        }
        resolved_parent_[rec->notation] = parent;
        children_[parent.value_or("")].push_back(rec);
    }
    for (auto& facet : aux_facets_) {
        facet.classes.clear();
        for (const ClassRecord* rec : ordered_)
            if (rec->facet == facet.facet_id) facet.classes.push_back(rec->notation);
    }
}

// ---------------------------------------------------------------------------
// SchemeBuilder

SchemeBuilder::SchemeBuilder(std::string id, std::string title, HierarchyMode mode, std::string default_lang)
    : id_(std::move(id)), title_(std::move(title)), mode_(mode), default_lang_(std::move(default_lang)) {}

void SchemeBuilder::add_facet(std::string facet_id, std::string open, std::string close, Origin at) {
    entries_.push_back({Op::facet, {std::move(facet_id), std::move(open), std::move(close)}, std::move(at)});
}
void SchemeBuilder::add_caption(std::string notation, std::string lang, std::string caption, Origin at) {
    entries_.push_back({Op::caption, {std::move(notation), std::move(lang), std::move(caption)}, std::move(at)});
}
void SchemeBuilder::add_aux_caption(std::string facet_id, std::string digits, std::string lang, std::string caption,
                                    Origin at) {
    entries_.push_back({Op::aux_caption,
                        {std::move(facet_id), std::move(digits), std::move(lang), std::move(caption)},
                        std::move(at)});
}
void SchemeBuilder::add_parent(std::string notation, std::string parent, Origin at) {
    entries_.push_back({Op::parent, {std::move(notation), std::move(parent)}, std::move(at)});
}
void SchemeBuilder::add_see_also(std::string notation, std::string target, Origin at) {
    entries_.push_back({Op::see_also, {std::move(notation), std::move(target)}, std::move(at)});
}
void SchemeBuilder::add_term(std::string notation, std::string lang, std::string term, Origin at) {
    entries_.push_back({Op::term, {std::move(notation), std::move(lang), std::move(term)}, std::move(at)});
}
void SchemeBuilder::set_discipline(std::string notation, std::string label, Origin at) {
    entries_.push_back({Op::discipline, {std::move(notation), std::move(label)}, std::move(at)});
}
void SchemeBuilder::set_system_no(std::string notation, std::string number, Origin at) {
    entries_.push_back({Op::system_no, {std::move(notation), std::move(number)}, std::move(at)});
}
void SchemeBuilder::add_instruction(AddInstruction instr, Origin at) {
    Entry e{Op::instruction, {}, std::move(at)};
    e.instr = std::move(instr);
    entries_.push_back(std::move(e));
}
void SchemeBuilder::add_formula_slot(std::string formula, FacetSlot slot, Origin at) {
    Entry e{Op::slot, {std::move(formula)}, std::move(at)};
    e.slot = std::move(slot);
    entries_.push_back(std::move(e));
}

SchemeBuilder::Result SchemeBuilder::build() const { return assemble(true); }

std::unique_ptr<Scheme> SchemeBuilder::build_unvalidated() const { return assemble(false).scheme; }

SchemeBuilder::Result SchemeBuilder::assemble(bool validate) const {
    Result result;
    auto scheme = std::unique_ptr<Scheme>(new Scheme());
    Scheme& s = *scheme;
    s.id_ = id_;
    s.title_ = title_;
    s.mode_ = mode_;
    s.default_lang_ = default_lang_;

    auto diag = [&](const Origin& at, std::string msg, bool fatal = false) {
        result.diagnostics.push_back({at.file, at.line, std::move(msg), fatal});
        result.fatal = result.fatal || fatal;
    };
    auto resolve = [&](const std::string& text, const Origin& at) -> std::optional<std::string> {
        try {
            return s.canonicalize(text);
        } catch (const ParseError& e) {
            diag(at, "malformed notation '" + text + "': " + e.what());
            return std::nullopt;
        }
    };

    // Facets first: every later notation may use their delimiters.
    for (const auto& e : entries_) {
        if (e.op != Op::facet) continue;
        try {
            s.registry_.add({e.args[0], e.args[1], e.args[2]});
            s.aux_facets_.push_back({e.args[0], e.args[1], e.args[2], {}});
        } catch (const InvalidArgumentError& err) {
            diag(e.at, err.what());
        }
    }

    auto add_caption = [&](const Origin& at, NotationExpr expr, const std::string& lang, const std::string& text) {
        if (lang.empty() || text.empty()) {
            diag(at, "caption needs a language and text");
            return;
        }
        std::string key = format(expr);
        auto [it, fresh] = s.records_.try_emplace(key);
        ClassRecord& rec = it->second;
        if (fresh) {
            rec.notation = key;
            rec.kind = kind_of(expr);
            if (const auto* a = expr.get_if<Auxiliary>()) rec.facet = a->facet;
            rec.expr = std::move(expr);
        }
        if (!rec.captions.emplace(lang, text).second) {
            diag(at, "duplicate notation " + key + " (caption for '" + lang + "' already defined)", true);
        }
    };

    for (const auto& e : entries_) {
        if (e.op == Op::caption) {
            try {
                add_caption(e.at, s.parse(e.args[0]), e.args[1], e.args[2]);
            } catch (const ParseError& err) {
                diag(e.at, "malformed notation '" + e.args[0] + "': " + err.what());
            }
        } else if (e.op == Op::aux_caption) {
            const FacetDelimiters* f = s.registry_.by_id(e.args[0]);
            if (!f) {
                diag(e.at, "unknown facet id '" + e.args[0] + "'");
                continue;
            }
            try {
                NotationExpr expr = classweave::parse(f->open + e.args[1] + f->close, s.registry_);
                if (!expr.is<Auxiliary>()) throw ParseError(0, "not a plain auxiliary number");
                add_caption(e.at, std::move(expr), e.args[2], e.args[3]);
            } catch (const ParseError& err) {
                diag(e.at, "malformed auxiliary '" + e.args[1] + "': " + err.what());
            }
        }
    }

    auto lookup = [&](const std::string& text, const Origin& at) -> ClassRecord* {
        auto key = resolve(text, at);
        if (!key) return nullptr;
        auto it = s.records_.find(*key);
        if (it == s.records_.end()) {
            diag(at, "reference to unknown class " + *key);
            return nullptr;
        }
        return &it->second;
    };

    for (const auto& e : entries_) {
        switch (e.op) {
            case Op::parent: {
                ClassRecord* rec = lookup(e.args[0], e.at);
                auto target = resolve(e.args[1], e.at);
                if (!rec || !target) break;
                if (validate && !s.records_.count(*target)) {
                    diag(e.at, "dangling parent " + *target + " for " + rec->notation);
                } else if (validate && *target == rec->notation) {
                    diag(e.at, "class " + rec->notation + " cannot be its own parent");
                } else if (validate && rec->parent) {
                    diag(e.at, "class " + rec->notation + " already has parent " + *rec->parent);
                } else {
                    rec->parent = *target;
                }
                break;
            }
            case Op::see_also: {
                ClassRecord* rec = lookup(e.args[0], e.at);
                auto target = resolve(e.args[1], e.at);
                if (!rec || !target) break;
                if (validate && !s.records_.count(*target)) {
                    diag(e.at, "dangling see-also " + *target + " from " + rec->notation);
                } else if (*target == rec->notation) {
                    diag(e.at, "class " + rec->notation + " refers to itself");
                } else if (std::find(rec->see_also.begin(), rec->see_also.end(), *target) == rec->see_also.end()) {
                    rec->see_also.push_back(*target);
                }
                break;
            }
            case Op::term: {
                ClassRecord* rec = lookup(e.args[0], e.at);
                if (!rec) break;
                if (e.args[1].empty() || e.args[2].empty()) {
                    diag(e.at, "index term needs a language and text");
                    break;
                }
                auto& terms = rec->index_terms[e.args[1]];
                if (std::find(terms.begin(), terms.end(), e.args[2]) == terms.end()) terms.push_back(e.args[2]);
                break;
            }
            case Op::discipline: {
                if (ClassRecord* rec = lookup(e.args[0], e.at)) {
                    rec->is_discipline = true;
                    rec->discipline_label = e.args[1];
                }
                break;
            }
            case Op::system_no: {
                if (ClassRecord* rec = lookup(e.args[0], e.at)) rec->system_no = e.args[1];
                break;
            }
            case Op::instruction: {
                if (auto why = e.instr.problem(); !why.empty()) {
                    diag(e.at, why);
                } else {
                    s.add_instructions_.push_back(e.instr);
                }
                break;
            }
            case Op::slot: {
                auto& f = s.formulas_[e.args[0]];
                f.name = e.args[0];
                f.slots.push_back(e.slot);
                break;
            }
            default: break;
        }
    }

    for (auto it = s.formulas_.begin(); it != s.formulas_.end();) {
        if (auto why = it->second.problem(); !why.empty()) {
            diag({}, why);
            it = s.formulas_.erase(it);
        } else {
            ++it;
        }
    }

    s.finalize();

    // Stored links can close a loop with notational ancestry; cut one stored
    // link inside each loop and recompute until the graph is a forest.
    while (validate) {
        std::vector<std::string> cycle;
        for (const ClassRecord* rec : s.ordered_) {
            std::vector<std::string> path{rec->notation};
            for (auto up = s.resolved_parent_.at(rec->notation); up; up = s.resolved_parent_.at(*up)) {
                auto hit = std::find(path.begin(), path.end(), *up);
                if (hit != path.end()) {
                    cycle.assign(hit, path.end());
                    break;
                }
                path.push_back(*up);
                if (!s.records_.count(*up)) break;
            }
            if (!cycle.empty()) break;
        }
        if (cycle.empty()) break;
        std::string loop;
        for (const auto& c : cycle) loop += c + " -> ";
        for (const auto& c : cycle) {
            ClassRecord& r = s.records_.at(c);
            if (r.parent) {
                diag({}, "parent cycle " + loop + cycle.front() + "; dropping parent link of " + c);
                r.parent.reset();
                break;
            }
        }
        s.finalize();
    }

    result.scheme = std::move(scheme);
    return result;
}

}  // namespace classweave
