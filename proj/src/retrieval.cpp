#include "classweave/retrieval.hpp"

#include <algorithm>
#include <functional>

#include "classweave/errors.hpp"
#include "classweave/indexes.hpp"

namespace classweave {

const char* role_name(RowRole r) {
    switch (r) {
        case RowRole::broader: return "broader";
        case RowRole::match: return "match";
        case RowRole::narrower: return "narrower";
    }
    return "?";
}

Collection::Collection(std::shared_ptr<const Scheme> scheme)
    : scheme_(std::move(scheme)), snapshot_(std::make_shared<StoreSnapshot>()) {}

std::shared_ptr<const StoreSnapshot> Collection::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

std::optional<std::string> Collection::anchor_of(const NotationExpr& component) const {
    std::string key = format(component);
    if (scheme_->get_class(key)) return key;
    return scheme_->parent_of(key);
}

IngestReport Collection::ingest(const std::vector<ClassifiedDocument>& documents) {
    std::lock_guard write_lock(writer_);

    auto next = std::make_shared<StoreSnapshot>(*snapshot());
    IngestReport report;
    for (const auto& doc : documents) {
        if (doc.doc_id.empty()) {
            report.rejected.push_back({doc.doc_id, "empty doc_id"});
            continue;
        }
        if (next->by_id.count(doc.doc_id)) {
            report.rejected.push_back({doc.doc_id, "duplicate doc_id"});
            continue;
        }
        if (doc.classmarks.empty()) {
            report.rejected.push_back({doc.doc_id, "no classmarks"});
            continue;
        }
        std::vector<Component> comps;
        std::string failure;
        for (const auto& mark : doc.classmarks) {
            try {
                for (auto& c : decompose(scheme_->parse(mark))) {
                    auto same = [&](const Component& x) { return x.canonical == c.canonical; };
                    if (std::none_of(comps.begin(), comps.end(), same)) comps.push_back(std::move(c));
                }
            } catch (const ParseError& e) {
                failure = "classmark '" + mark + "': " + e.what();
                break;
            }
        }
        if (!failure.empty()) {
            report.rejected.push_back({doc.doc_id, failure});
            continue;
        }
        const std::size_t idx = next->documents.size();
        next->documents.push_back(doc);
        next->by_id[doc.doc_id] = idx;
        for (const auto& c : comps) {
            next->postings[c.canonical].insert(idx);
            if (auto anchor = anchor_of(scheme_->parse(c.canonical))) next->anchored[*anchor].insert(idx);
        }
        next->components.push_back(std::move(comps));
        ++report.accepted;
    }

    next->aggregate.clear();
    std::function<std::size_t(const ClassRecord&)> total = [&](const ClassRecord& rec) {
        std::size_t n = 0;
        if (auto it = next->anchored.find(rec.notation); it != next->anchored.end()) n = it->second.size();
        for (const ClassRecord* child : scheme_->children_of(rec.notation)) n += total(*child);
        next->aggregate[rec.notation] = n;
        return n;
    };
    for (const ClassRecord* top : scheme_->children_of("")) total(*top);

    std::lock_guard lock(mutex_);
    snapshot_ = std::move(next);
    return report;
}

std::size_t Collection::direct_hits(std::string_view notation) const {
    auto snap = snapshot();
    auto it = snap->anchored.find(scheme_->canonicalize(notation));
    return it == snap->anchored.end() ? 0 : it->second.size();
}

std::size_t Collection::aggregate_hits(std::string_view notation) const {
    auto snap = snapshot();
    if (notation.empty()) return snap->documents.size();
    const NotationExpr expr = scheme_->parse(notation);
    if (auto it = snap->aggregate.find(format(expr)); it != snap->aggregate.end()) return it->second;
    return explode_ids(*snap, expr).size();
}

std::set<std::string> Collection::posted_under(std::string_view key) const {
    auto snap = snapshot();
    std::set<std::string> out;
    if (auto it = snap->postings.find(std::string(key)); it != snap->postings.end())
        for (std::size_t i : it->second) out.insert(snap->documents[i].doc_id);
    return out;
}

namespace {

bool covers(const NotationExpr& target, const NotationExpr& component) {
    if (target == component) return true;
    if (const auto* t = target.get_if<Simple>()) {
        if (const auto* c = component.get_if<Simple>()) return is_descendant(*t, *c);
        if (const auto* c = component.get_if<Span>())
            return is_descendant(*t, Simple{c->left}) && is_descendant(*t, Simple{c->right});
        return false;
    }
    if (const auto* t = target.get_if<Span>()) {
        if (const auto* c = component.get_if<Simple>()) return span_covers(*t, *c);
        if (const auto* c = component.get_if<Span>())
            return span_covers(*t, Simple{c->left}) && span_covers(*t, Simple{c->right});
        return false;
    }
    if (const auto* t = target.get_if<Auxiliary>()) {
        const auto* c = component.get_if<Auxiliary>();
        return c && c->facet == t->facet && is_descendant(Simple{t->digits}, Simple{c->digits});
    }
    return false;
}

std::set<std::size_t> intersect(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    std::set<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

}  // namespace

std::set<std::size_t> Collection::explode_ids(const StoreSnapshot& snap, const NotationExpr& expr) const {
    if (const auto* c = expr.get_if<Compound>()) {
        auto out = explode_ids(snap, std::visit([](const auto& m) { return NotationExpr(m); }, c->main));
        for (const auto& a : c->auxiliaries) out = intersect(out, explode_ids(snap, NotationExpr(a)));
        return out;
    }
    if (const auto* r = expr.get_if<Relation>()) {
        auto out = explode_ids(snap, r->operands.front());
        for (std::size_t i = 1; i < r->operands.size(); ++i) out = intersect(out, explode_ids(snap, r->operands[i]));
        return out;
    }

    std::set<std::size_t> out;
    const std::string key = format(expr);
    // Stored subtree, following explicit links as well as notation.
    if (scheme_->get_class(key)) {
        std::vector<std::string> stack{key};
        while (!stack.empty()) {
            const std::string cur = std::move(stack.back());
            stack.pop_back();
            if (auto it = snap.anchored.find(cur); it != snap.anchored.end()) out.insert(it->second.begin(), it->second.end());
            for (const ClassRecord* child : scheme_->children_of(cur)) stack.push_back(child->notation);
        }
    }
    // Components that sit under the notation by digit algebra alone.
    for (const auto& [ckey, docs] : snap.postings) {
        if (covers(expr, scheme_->parse(ckey))) out.insert(docs.begin(), docs.end());
    }
    return out;
}

std::set<std::string> Collection::explode(std::string_view notation) const {
    auto snap = snapshot();
    std::set<std::string> out;
    if (notation.empty()) {
        for (const auto& d : snap->documents) out.insert(d.doc_id);
        return out;
    }
    for (std::size_t i : explode_ids(*snap, scheme_->parse(notation))) out.insert(snap->documents[i].doc_id);
    return out;
}

HitRow Collection::row(const StoreSnapshot& snap, const ClassRecord& rec, std::string_view lang, RowRole role) const {
    HitRow r;
    r.notation = rec.notation;
    r.caption = scheme_->caption(rec, lang).text;
    if (auto it = snap.anchored.find(rec.notation); it != snap.anchored.end()) r.direct_hits = it->second.size();
    if (auto it = snap.aggregate.find(rec.notation); it != snap.aggregate.end()) r.aggregate_hits = it->second;
    r.context = scheme_->context_label(rec, lang);
    r.role = role;
    return r;
}

std::vector<HitRow> Collection::search_term(std::string_view query, std::string_view lang) const {
    auto snap = snapshot();
    std::map<std::string, HitRow> rows;
    auto add = [&](const ClassRecord& rec, RowRole role) {
        auto [it, fresh] = rows.try_emplace(rec.notation);
        if (fresh) {
            it->second = row(*snap, rec, lang, role);
        } else if (role == RowRole::match) {
            it->second.role = RowRole::match;
        }
    };
    auto has_hits = [&](const ClassRecord& rec) {
        auto it = snap->aggregate.find(rec.notation);
        return it != snap->aggregate.end() && it->second > 0;
    };

    for (const TermMatch& m : lookup_term(*scheme_, query, lang)) {
        const ClassRecord& rec = scheme_->require_class(m.notation);
        add(rec, RowRole::match);
        if (auto p = scheme_->parent_of(rec.notation)) {
            const ClassRecord& parent = scheme_->require_class(*p);
            if (has_hits(parent)) add(parent, RowRole::broader);
        }
        std::vector<const ClassRecord*> stack = scheme_->children_of(rec.notation);
        while (!stack.empty()) {
            const ClassRecord* cur = stack.back();
            stack.pop_back();
            if (!has_hits(*cur)) continue;
            add(*cur, RowRole::narrower);
            for (const ClassRecord* c : scheme_->children_of(cur->notation)) stack.push_back(c);
        }
    }

    std::vector<HitRow> out;
    for (const ClassRecord* rec : scheme_->classes()) {
        if (auto it = rows.find(rec->notation); it != rows.end()) out.push_back(std::move(it->second));
    }
    return out;
}

BrowseView Collection::browse(std::string_view notation, bool aggregate, std::string_view lang) const {
    auto snap = snapshot();
    BrowseView view;
    view.aggregate = aggregate;
    std::string key;
    if (notation.empty()) {
        view.self.notation = "";
        view.self.caption = scheme_->title();
        view.self.aggregate_hits = snap->documents.size();
    } else {
        const ClassRecord& rec = scheme_->require_class(notation);
        key = rec.notation;
        view.self = row(*snap, rec, lang, RowRole::match);
        if (auto p = scheme_->parent_of(key)) view.parent = row(*snap, scheme_->require_class(*p), lang, RowRole::broader);
    }
    for (const ClassRecord* child : scheme_->children_of(key)) {
        view.children.push_back(row(*snap, *child, lang, RowRole::narrower));
    }
    return view;
}

BroadenResult Collection::broaden_until(std::string_view notation, std::size_t min_hits) const {
    if (min_hits < 1) throw InvalidArgumentError("min_hits must be at least 1");
    auto snap = snapshot();
    std::optional<NotationExpr> cur = scheme_->parse(notation);
    while (cur) {
        const std::size_t n = explode_ids(*snap, *cur).size();
        if (n >= min_hits) return {format(*cur), n};
        cur = broaden_any(*cur);
    }
    return {std::nullopt, snap->documents.size()};
}

std::vector<RelatedRow> Collection::syndetic_expand(std::string_view notation, std::string_view lang) const {
    auto snap = snapshot();
    const ClassRecord& rec = scheme_->require_class(notation);
    std::vector<RelatedRow> out;
    for (const auto& target : rec.see_also) {
        const ClassRecord& t = scheme_->require_class(target);
        RelatedRow r{t.notation, scheme_->caption(t, lang).text, 0};
        if (auto it = snap->anchored.find(t.notation); it != snap->anchored.end()) r.direct_hits = it->second.size();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        const bool word = u >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        if (word) {
            cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<Suggestion> Collection::suggest_classes(std::string_view text, std::size_t top_k,
                                                    std::string_view lang) const {
    if (top_k < 1) throw InvalidArgumentError("top_k must be at least 1");
    const auto words = tokenize_words(text);
    if (words.empty()) throw InvalidArgumentError("suggest needs some text");

    std::set<std::string> queries(words.begin(), words.end());
    for (std::size_t i = 0; i + 1 < words.size(); ++i) queries.insert(words[i] + " " + words[i + 1]);

    std::map<std::string, int> score;
    for (const auto& q : queries) {
        for (const TermMatch& m : lookup_term(*scheme_, q, lang)) {
            score[m.notation] += m.kind == MatchKind::exact ? 3 : m.kind == MatchKind::prefix ? 2 : 1;
        }
    }
    std::vector<Suggestion> out;
    for (const ClassRecord* rec : scheme_->classes()) {
        if (auto it = score.find(rec->notation); it != score.end()) out.push_back({rec->notation, it->second});
    }
    std::stable_sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) { return a.score > b.score; });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

}  // namespace classweave
