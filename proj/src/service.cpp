#include "classweave/service.hpp"

#include <filesystem>
#include <fstream>

#include "classweave/errors.hpp"
#include "classweave/indexes.hpp"
#include "classweave/synthesis.hpp"

namespace classweave {

namespace fs = std::filesystem;

ServiceConfig ServiceConfig::from_json(const json& j, const std::string& base_dir) {
    ServiceConfig c;
    auto resolve = [&](const std::string& p) {
        if (base_dir.empty() || fs::path(p).is_absolute()) return p;
        return (fs::path(base_dir) / p).lexically_normal().string();
    };
    for (const auto& p : j.value("scheme_paths", std::vector<std::string>{})) c.scheme_paths.push_back(resolve(p));
    for (const auto& p : j.value("docs_paths", std::vector<std::string>{})) c.docs_paths.push_back(resolve(p));
    c.port = j.value("port", c.port);
    c.host = j.value("host", c.host);
    c.default_lang = j.value("default_lang", c.default_lang);
    c.min_hits_default = j.value("min_hits_default", c.min_hits_default);
    c.default_scheme = j.value("default_scheme", c.default_scheme);
    return c;
}

ServiceConfig ServiceConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgumentError("cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgumentError("config " + path + ": " + e.what());
    }
    return from_json(j, fs::path(path).parent_path().string());
}

std::string ServiceConfig::problem() const {
    if (scheme_paths.empty()) return "no scheme paths configured";
    if (port < 1 || port > 65535) return "port " + std::to_string(port) + " is outside 1-65535";
    if (min_hits_default < 1) return "min_hits_default must be at least 1";
    return {};
}

json to_json(const HitRow& r) {
    return {{"notation", r.notation},           {"caption", r.caption},
            {"direct_hits", r.direct_hits},     {"aggregate_hits", r.aggregate_hits},
            {"context", r.context},             {"role", role_name(r.role)}};
}

json to_json(const Diagnostic& d) {
    return {{"file", d.file}, {"line", d.line}, {"message", d.message}, {"fatal", d.fatal}};
}

namespace {

json links_json(const std::vector<AuthorityLink>& v) {
    json out = json::array();
    for (const auto& l : v) {
        out.push_back({{"lang", l.lang}, {"text", l.text}, {"notation", l.notation}, {"fallback", l.fallback}});
    }
    return out;
}

json authority_json(const AuthorityRecord& r) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"lang", t.lang}, {"text", t.text}, {"fallback", t.fallback}});
    return {{"notation", r.notation},
            {"terms", terms},
            {"broader", links_json(r.broader)},
            {"narrower", links_json(r.narrower)},
            {"related", links_json(r.related)},
            {"system_no", r.system_no.empty() ? json(nullptr) : json(r.system_no)}};
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
    std::vector<std::string> paths = config_.scheme_paths;
    catalog_ = load_catalog(paths);
    for (const auto& id : catalog_.scheme_order) {
        collections_.emplace(id, std::make_unique<Collection>(catalog_.schemes.at(id)));
    }
    if (!config_.default_scheme.empty() && !catalog_.schemes.count(config_.default_scheme)) {
        catalog_.diagnostics.push_back({{}, 0, "default scheme '" + config_.default_scheme + "' is not loaded", true});
        catalog_.fatal = true;
    }
    if (catalog_.scheme_order.empty()) {
        catalog_.diagnostics.push_back({{}, 0, "no scheme loaded", true});
        catalog_.fatal = true;
        return;
    }

    std::vector<ClassifiedDocument> docs = catalog_.documents;
    for (const auto& p : config_.docs_paths) {
        Catalog d = load_catalog({p});
        catalog_.diagnostics.insert(catalog_.diagnostics.end(), d.diagnostics.begin(), d.diagnostics.end());
        catalog_.fatal = catalog_.fatal || d.fatal;
        if (!d.scheme_order.empty()) {
            catalog_.diagnostics.push_back({p, 0, "document file declares a scheme; records ignored", false});
        }
        docs.insert(docs.end(), d.documents.begin(), d.documents.end());
    }
    if (!docs.empty()) initial_ingest_ = collection_mut("").ingest(docs);
}

std::string Service::resolve_id(const std::string& id) const {
    if (!id.empty()) return id;
    if (!config_.default_scheme.empty()) return config_.default_scheme;
    if (catalog_.scheme_order.empty()) throw NotFoundError("no scheme loaded");
    return catalog_.scheme_order.front();
}

const Scheme& Service::scheme(const std::string& id) const {
    auto s = catalog_.scheme(resolve_id(id));
    if (!s) throw NotFoundError("unknown scheme '" + id + "'");
    return *s;
}

const Collection& Service::collection(const std::string& id) const {
    auto it = collections_.find(resolve_id(id));
    if (it == collections_.end()) throw NotFoundError("unknown scheme '" + id + "'");
    return *it->second;
}

Collection& Service::collection_mut(const std::string& id) {
    auto it = collections_.find(resolve_id(id));
    if (it == collections_.end()) throw NotFoundError("unknown scheme '" + id + "'");
    return *it->second;
}

std::string Service::lang_or_default(const std::string& lang) const {
    return lang.empty() ? config_.default_lang : lang;
}

json Service::schemes() const {
    json list = json::array();
    for (const auto& id : catalog_.scheme_order) {
        const Scheme& s = *catalog_.schemes.at(id);
        json facets = json::array();
        for (const auto& f : s.aux_facets()) {
            facets.push_back({{"facet_id", f.facet_id}, {"open", f.open_delim}, {"close", f.close_delim},
                              {"classes", f.classes.size()}});
        }
        list.push_back({{"id", s.id()},
                        {"title", s.title()},
                        {"hierarchy_mode", mode_name(s.mode())},
                        {"default_lang", s.default_lang()},
                        {"classes", s.size()},
                        {"languages", s.languages()},
                        {"aux_facets", facets},
                        {"add_instructions", s.add_instructions().size()},
                        {"facet_formulas", s.facet_formulas().size()},
                        {"documents", collections_.at(id)->size()}});
    }
    return {{"default", resolve_id("")}, {"schemes", list}};
}

json Service::validate() const {
    json diags = json::array();
    for (const auto& d : catalog_.diagnostics) diags.push_back(to_json(d));
    json rejected = json::array();
    for (const auto& r : initial_ingest_.rejected) rejected.push_back({{"doc_id", r.doc_id}, {"reason", r.reason}});
    json out = schemes();
    out["ok"] = !catalog_.fatal;
    out["diagnostics"] = diags;
    out["mappings"] = catalog_.concordance.entries().size();
    out["ingest"] = {{"accepted", initial_ingest_.accepted}, {"rejected", rejected}};
    return out;
}

json Service::get_class(const std::string& scheme_id, const std::string& notation, const std::string& lang_in) const {
    const Scheme& s = scheme(scheme_id);
    const std::string lang = lang_or_default(lang_in);
    const ClassRecord& rec = s.require_class(notation);
    const Label label = s.caption(rec, lang);
    auto brief = [&](const ClassRecord& r) {
        return json{{"notation", r.notation}, {"caption", s.caption(r, lang).text}};
    };
    json crumbs = json::array();
    auto anc = s.ancestors(rec);
    for (auto it = anc.rbegin(); it != anc.rend(); ++it) crumbs.push_back(brief(**it));
    json children = json::array();
    for (const ClassRecord* c : s.children_of(rec.notation)) children.push_back(brief(*c));
    json see_also = json::array();
    for (const auto& sa : s.see_also_of(rec.notation)) see_also.push_back({{"notation", sa.notation}, {"caption", sa.caption}});
    const Collection& col = collection(scheme_id);
    auto parent = s.parent_of(rec.notation);
    return {{"scheme", s.id()},
            {"notation", rec.notation},
            {"kind", kind_name(rec.kind)},
            {"facet", rec.facet.empty() ? json(nullptr) : json(rec.facet)},
            {"caption", label.text},
            {"lang", label.lang},
            {"fallback", label.fallback},
            {"captions", rec.captions},
            {"index_terms", rec.index_terms},
            {"parent", parent ? json(*parent) : json(nullptr)},
            {"breadcrumbs", crumbs},
            {"children", children},
            {"see_also", see_also},
            {"is_discipline", rec.is_discipline},
            {"context", s.context_label(rec, lang)},
            {"system_no", rec.system_no.empty() ? json(nullptr) : json(rec.system_no)},
            {"direct_hits", col.direct_hits(rec.notation)},
            {"aggregate_hits", col.aggregate_hits(rec.notation)}};
}

json Service::search(const std::string& scheme_id, const std::string& query, const std::string& lang_in) const {
    if (query.find_first_not_of(" \t") == std::string::npos) throw InvalidArgumentError("empty query");
    const std::string lang = lang_or_default(lang_in);
    json rows = json::array();
    for (const auto& r : collection(scheme_id).search_term(query, lang)) rows.push_back(to_json(r));
    return {{"scheme", scheme(scheme_id).id()}, {"query", query}, {"lang", lang}, {"rows", rows}};
}

json Service::browse(const std::string& scheme_id, const std::string& notation, bool aggregate,
                     const std::string& lang_in) const {
    const std::string lang = lang_or_default(lang_in);
    const BrowseView v = collection(scheme_id).browse(notation, aggregate, lang);
    json children = json::array();
    for (const auto& c : v.children) children.push_back(to_json(c));
    return {{"scheme", scheme(scheme_id).id()},
            {"notation", v.self.notation.empty() ? json(nullptr) : json(v.self.notation)},
            {"aggregate", aggregate},
            {"parent", v.parent ? to_json(*v.parent) : json(nullptr)},
            {"self", to_json(v.self)},
            {"children", children}};
}

json Service::explode(const std::string& scheme_id, const std::string& notation) const {
    const Scheme& s = scheme(scheme_id);
    auto ids = collection(scheme_id).explode(notation);
    return {{"scheme", s.id()},
            {"notation", notation.empty() ? json(nullptr) : json(s.canonicalize(notation))},
            {"count", ids.size()},
            {"doc_ids", ids}};
}

json Service::broaden(const std::string& scheme_id, const std::string& notation, std::size_t min_hits) const {
    const Scheme& s = scheme(scheme_id);
    auto r = collection(scheme_id).broaden_until(notation, min_hits);
    return {{"scheme", s.id()},
            {"notation", s.canonicalize(notation)},
            {"min_hits", min_hits},
            {"result", r.notation ? json(*r.notation) : json(nullptr)},
            {"hits", r.hits}};
}

json Service::related(const std::string& scheme_id, const std::string& notation, const std::string& lang_in) const {
    const Scheme& s = scheme(scheme_id);
    json rows = json::array();
    for (const auto& r : collection(scheme_id).syndetic_expand(notation, lang_or_default(lang_in))) {
        rows.push_back({{"notation", r.notation}, {"caption", r.caption}, {"direct_hits", r.direct_hits}});
    }
    return {{"scheme", s.id()}, {"notation", s.canonicalize(notation)}, {"rows", rows}};
}

json Service::suggest(const std::string& scheme_id, const std::string& text, std::size_t top_k,
                      const std::string& lang_in) const {
    const Scheme& s = scheme(scheme_id);
    const std::string lang = lang_or_default(lang_in);
    json rows = json::array();
    for (const auto& r : collection(scheme_id).suggest_classes(text, top_k, lang)) {
        rows.push_back({{"notation", r.notation},
                        {"caption", s.caption(s.require_class(r.notation), lang).text},
                        {"score", r.score}});
    }
    return {{"scheme", s.id()}, {"text", text}, {"top_k", top_k}, {"rows", rows}};
}

json Service::authority(const std::string& scheme_id, const std::vector<std::string>& notations,
                        const std::vector<std::string>& langs_in) const {
    const Scheme& s = scheme(scheme_id);
    std::vector<std::string> langs = langs_in;
    if (langs.empty()) langs = s.languages();
    auto exported = export_authority(s, notations, langs);
    json records = json::array();
    for (const auto& n : notations) {
        try {
            records.push_back(authority_json(s.authority_record(n, langs)));
        } catch (const Error&) {
            // reported through export diagnostics
        }
    }
    return {{"scheme", s.id()},
            {"langs", langs},
            {"records", records},
            {"text", exported.text},
            {"diagnostics", exported.diagnostics}};
}

std::string Service::skos(const std::string& scheme_id) const { return export_skos(scheme(scheme_id)); }

json Service::map(const std::string& source, const std::string& notation, const std::string& target) const {
    FacetRegistry facets;
    ParseOptions opts{true};
    if (auto s = catalog_.scheme(source)) {
        facets = s->facets();
        opts = s->parse_options();
    }
    const Translation t = catalog_.concordance.translate(source, notation, target, facets, opts);
    return {{"source_scheme", source},
            {"notation", canonicalize(notation, facets, opts)},
            {"target_scheme", target},
            {"mapped", t.target_notation.has_value()},
            {"target_notation", t.target_notation ? json(*t.target_notation) : json(nullptr)},
            {"exactness", t.target_notation ? json(exactness_name(t.exactness)) : json(nullptr)},
            {"hops_broadened", t.hops_broadened}};
}

json Service::synthesize(const std::string& scheme_id, const std::string& main,
                         const std::vector<std::pair<std::string, std::string>>& auxiliaries) const {
    const Scheme& s = scheme(scheme_id);
    NotationExpr expr = s.parse(main);
    for (const auto& [facet, value] : auxiliaries) expr = apply_auxiliary(s, expr, facet, value);
    json comps = json::array();
    for (const auto& c : decompose(expr)) comps.push_back({{"kind", c.kind}, {"notation", c.canonical}});
    return {{"scheme", s.id()}, {"notation", format(expr)}, {"components", comps}};
}

json Service::expand_add(const std::string& scheme_id, const std::string& base, const std::string& source) const {
    const Scheme& s = scheme(scheme_id);
    const NotationExpr b = s.parse(base);
    const NotationExpr src = s.parse(source);
    if (!b.is<Simple>() || !src.is<Simple>()) throw InvalidArgumentError("base and source must be simple numbers");
    const AddInstruction& instr = find_add_instruction(s, b.as<Simple>().digits, src.as<Simple>());
    const Simple out = classweave::expand_add(instr, src.as<Simple>());
    return {{"scheme", s.id()},
            {"base", format(b)},
            {"source", format(src)},
            {"instruction",
             {{"base", format_digits(instr.base)},
              {"source_left", format_digits(instr.source_left)},
              {"source_right", format_digits(instr.source_right)},
              {"strip_prefix", format_digits(instr.strip_prefix)}}},
            {"notation", format(NotationExpr(out))}};
}

json Service::chain_index(const std::string& scheme_id, const std::string& lang_in) const {
    const Scheme& s = scheme(scheme_id);
    const std::string lang = lang_or_default(lang_in);
    const auto entries = classweave::chain_index(s, lang);
    json list = json::array();
    for (const auto& e : entries) list.push_back({{"notation", e.notation}, {"chain", e.chain}});
    return {{"scheme", s.id()}, {"lang", lang}, {"entries", list}, {"tsv", chain_index_tsv(entries)}};
}

json Service::relative_index(const std::string& scheme_id, const std::string& lang_in) const {
    const Scheme& s = scheme(scheme_id);
    const std::string lang = lang_or_default(lang_in);
    const auto index = classweave::relative_index(s, lang);
    json terms = json::object();
    for (const auto& [term, placements] : index) {
        json list = json::array();
        for (const auto& p : placements) list.push_back({{"context", p.context}, {"notation", p.notation}});
        terms[term] = list;
    }
    return {{"scheme", s.id()}, {"lang", lang}, {"terms", terms}, {"tsv", relative_index_tsv(index)}};
}

json Service::ingest(const std::string& scheme_id, const std::string& body) {
    std::vector<Diagnostic> diags;
    auto docs = read_documents(body, "request", diags);
    const IngestReport report = collection_mut(scheme_id).ingest(docs);
    json rejected = json::array();
    for (const auto& r : report.rejected) rejected.push_back({{"doc_id", r.doc_id}, {"reason", r.reason}});
    json d = json::array();
    for (const auto& x : diags) d.push_back(to_json(x));
    return {{"scheme", scheme(scheme_id).id()},
            {"accepted", report.accepted},
            {"rejected", rejected},
            {"diagnostics", d},
            {"documents", collection(scheme_id).size()}};
}

}  // namespace classweave
