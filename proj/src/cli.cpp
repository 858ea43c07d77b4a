#include "classweave/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <memory>
#include <sstream>

#include "classweave/errors.hpp"
#include "classweave/http.hpp"
#include "classweave/service.hpp"

namespace classweave {

namespace {

// Display width of UTF-8 text: one column per code point.
std::size_t width(const std::string& s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> w;
    for (const auto& r : rows) {
        if (w.size() < r.size()) w.resize(r.size(), 0);
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], width(r[i]));
    }
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            line += r[i];
            if (i + 1 < r.size()) line += std::string(w[i] - width(r[i]) + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
}

std::string str(const json& j) { return j.is_null() ? std::string() : j.is_string() ? j.get<std::string>() : j.dump(); }

// Rows from several disciplines carry their context label, as in
// "Zoology: Rodentia and Lagomorpha".
std::vector<std::string> labels(const json& rows) {
    std::set<std::string> contexts;
    for (const auto& r : rows) contexts.insert(r["context"].get<std::string>());
    std::vector<std::string> out;
    for (const auto& r : rows) {
        const std::string ctx = r["context"], cap = r["caption"];
        out.push_back(contexts.size() > 1 && !ctx.empty() && ctx != cap ? ctx + ": " + cap : cap);
    }
    return out;
}

void print_search(std::ostream& out, const json& j, bool aggregate) {
    out << j["query"].get<std::string>() << '\n';
    std::vector<std::vector<std::string>> rows{{"Notation", "Caption", "Hits"}};
    const auto caps = labels(j["rows"]);
    for (std::size_t i = 0; i < j["rows"].size(); ++i) {
        const auto& r = j["rows"][i];
        rows.push_back({r["notation"], caps[i], str(aggregate ? r["aggregate_hits"] : r["direct_hits"])});
    }
    print_table(out, rows);
}

void print_browse(std::ostream& out, const json& j) {
    const char* field = j["aggregate"].get<bool>() ? "aggregate_hits" : "direct_hits";
    std::vector<std::vector<std::string>> rows;
    auto notation = [](const json& r) {
        const std::string n = r["notation"];
        return n.empty() ? std::string("root") : n;
    };
    if (!j["parent"].is_null()) rows.push_back({"^", notation(j["parent"]), j["parent"]["caption"], str(j["parent"][field])});
    rows.push_back({"*", notation(j["self"]), j["self"]["caption"], str(j["self"][field])});
    for (const auto& c : j["children"]) rows.push_back({"-", notation(c), c["caption"], str(c[field])});
    print_table(out, rows);
}

struct Globals {
    std::string config;
    std::vector<std::string> scheme_files;
    std::vector<std::string> docs;
    std::string scheme;
    std::string lang;
    bool json = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ServiceConfig make_config(const Globals& g) {
    ServiceConfig cfg;
    if (!g.scheme_files.empty()) {
        cfg.scheme_paths = g.scheme_files;
    } else if (!g.config.empty()) {
        cfg = ServiceConfig::from_file(g.config);
    } else if (const char* env = std::getenv("CLASSWEAVE_CONFIG"); env && *env) {
        cfg = ServiceConfig::from_file(env);
    } else {
        throw UsageError("no schemes: pass --config, --scheme-file or set CLASSWEAVE_CONFIG");
    }
    cfg.docs_paths.insert(cfg.docs_paths.end(), g.docs.begin(), g.docs.end());
    if (!g.lang.empty()) cfg.default_lang = g.lang;
    if (!g.scheme.empty()) cfg.default_scheme = g.scheme;
    return cfg;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Classification scheme toolkit: notation, indexes, synthesis, retrieval and interchange",
                 "classweave"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "JSON service configuration");
    app.add_option("--scheme-file", g.scheme_files, "Scheme source file (repeatable; overrides the config)");
    app.add_option("--docs", g.docs, "Document file with D records (repeatable)");
    app.add_option("--scheme", g.scheme, "Scheme id (default: first loaded)");
    app.add_option("--lang", g.lang, "Caption language");
    app.add_flag("--json", g.json, "Structured output");

    std::string notation, term, text, base, source, main_n, target, src_scheme, langs;
    std::vector<std::string> aux, notations;
    bool aggregate = false;
    std::size_t min_hits = 0, top_k = 5;
    int port = 0;

    auto* validate = app.add_subcommand("validate", "Load every configured file and report diagnostics");
    auto* schemes = app.add_subcommand("schemes", "List loaded schemes");
    auto* show = app.add_subcommand("show", "Show one class with breadcrumbs and children");
    show->add_option("notation", notation)->required();
    auto* search = app.add_subcommand("search", "Term search with hierarchical hit display");
    search->add_option("term", term)->required();
    search->add_flag("--aggregate", aggregate, "Show subtree counts");
    auto* browse = app.add_subcommand("browse", "Parent, class and children with counts");
    browse->add_option("notation", notation, "Class to browse (omit for the top level)");
    browse->add_flag("--aggregate", aggregate, "Show subtree counts");
    auto* broaden = app.add_subcommand("broaden", "Broaden until enough documents match");
    broaden->add_option("notation", notation)->required();
    broaden->add_option("--min-hits", min_hits)->check(CLI::PositiveNumber);
    auto* explode = app.add_subcommand("explode", "Documents under a class and its subdivisions");
    explode->add_option("notation", notation)->required();
    auto* related = app.add_subcommand("related", "See-also targets with direct counts");
    related->add_option("notation", notation)->required();
    auto* synthesize = app.add_subcommand("synthesize", "Attach common auxiliaries to a main number");
    synthesize->add_option("--main", main_n)->required();
    synthesize->add_option("--aux", aux, "facet=value (repeatable)");
    auto* expand = app.add_subcommand("expand-add", "Apply an add-to-base instruction");
    expand->add_option("--base", base)->required();
    expand->add_option("--source", source)->required();
    auto* chain = app.add_subcommand("chain-index", "Chain index as tab-separated text");
    auto* relative = app.add_subcommand("relative-index", "Relative index as tab-separated text");
    auto* skos = app.add_subcommand("export-skos", "SKOS-style triples, one per line");
    auto* authority = app.add_subcommand("authority", "Authority records");
    authority->add_option("notation", notations)->required();
    authority->add_option("--langs", langs, "Comma-separated language tags");
    auto* map = app.add_subcommand("map", "Translate a notation through the concordance");
    map->add_option("source-scheme", src_scheme)->required();
    map->add_option("notation", notation)->required();
    map->add_option("--to", target)->required();
    auto* suggest = app.add_subcommand("suggest", "Suggest classes for free text");
    suggest->add_option("--text", text)->required();
    suggest->add_option("--top-k", top_k)->check(CLI::PositiveNumber);
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--port", port)->check(CLI::Range(1, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::unique_ptr<Service> svc;
    try {
        ServiceConfig cfg = make_config(g);
        if (port) cfg.port = port;
        if (auto why = cfg.problem(); !why.empty()) throw UsageError(why);
        svc = std::make_unique<Service>(std::move(cfg));
    } catch (const UsageError& e) {
        err << "classweave: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "classweave: " << e.what() << '\n';
        return 1;
    }

    if (validate->parsed()) {
        const json report = svc->validate();
        if (g.json) {
            out << report.dump(2) << '\n';
        } else {
            for (const auto& d : svc->diagnostics()) out << d.to_string() << '\n';
            for (const auto& s : report["schemes"]) {
                out << s["id"].get<std::string>() << ": " << str(s["classes"]) << " classes, " << str(s["documents"])
                    << " documents\n";
            }
            out << "mappings: " << str(report["mappings"]) << '\n';
            out << "documents accepted: " << str(report["ingest"]["accepted"])
                << ", rejected: " << report["ingest"]["rejected"].size() << '\n';
            out << (svc->fatal() ? "FAILED" : "OK") << '\n';
        }
        return svc->fatal() ? 1 : 0;
    }

    for (const auto& d : svc->diagnostics()) err << d.to_string() << '\n';
    if (svc->fatal()) return 1;

    const std::string& sid = g.scheme;
    const std::string lang = g.lang;
    try {
        if (schemes->parsed()) {
            const json j = svc->schemes();
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                std::vector<std::vector<std::string>> rows{{"Id", "Mode", "Classes", "Documents", "Title"}};
                for (const auto& s : j["schemes"]) {
                    rows.push_back({s["id"], s["hierarchy_mode"], str(s["classes"]), str(s["documents"]), s["title"]});
                }
                print_table(out, rows);
            }
        } else if (show->parsed()) {
            const json j = svc->get_class(sid, notation, lang);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                out << j["notation"].get<std::string>() << "  " << j["caption"].get<std::string>()
                    << (j["fallback"].get<bool>() ? " [" + j["lang"].get<std::string>() + "]" : "") << '\n';
                for (const auto& c : j["breadcrumbs"]) {
                    out << "  < " << c["notation"].get<std::string>() << "  " << c["caption"].get<std::string>() << '\n';
                }
                for (const auto& c : j["children"]) {
                    out << "  > " << c["notation"].get<std::string>() << "  " << c["caption"].get<std::string>() << '\n';
                }
                for (const auto& c : j["see_also"]) {
                    out << "  -> " << c["notation"].get<std::string>() << "  " << c["caption"].get<std::string>() << '\n';
                }
            }
        } else if (search->parsed()) {
            const json j = svc->search(sid, term, lang);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                print_search(out, j, aggregate);
            }
        } else if (browse->parsed()) {
            const json j = svc->browse(sid, notation, aggregate, lang);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                print_browse(out, j);
            }
        } else if (broaden->parsed()) {
            const json j = svc->broaden(sid, notation, min_hits ? min_hits : svc->config().min_hits_default);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                out << (j["result"].is_null() ? std::string("root") : j["result"].get<std::string>()) << '\t'
                    << str(j["hits"]) << '\n';
            }
        } else if (explode->parsed()) {
            const json j = svc->explode(sid, notation);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                for (const auto& id : j["doc_ids"]) out << id.get<std::string>() << '\n';
                err << str(j["count"]) << " documents\n";
            }
        } else if (related->parsed()) {
            const json j = svc->related(sid, notation, lang);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                std::vector<std::vector<std::string>> rows{{"Notation", "Caption", "Hits"}};
                for (const auto& r : j["rows"]) rows.push_back({r["notation"], r["caption"], str(r["direct_hits"])});
                print_table(out, rows);
            }
        } else if (synthesize->parsed()) {
            std::vector<std::pair<std::string, std::string>> pairs;
            for (const auto& a : aux) {
                const auto eq = a.find('=');
                if (eq == std::string::npos || eq == 0) {
                    err << "classweave: --aux expects facet=value, got '" << a << "'\n";
                    return 2;
                }
                pairs.emplace_back(a.substr(0, eq), a.substr(eq + 1));
            }
            const json j = svc->synthesize(sid, main_n, pairs);
            out << (g.json ? j.dump(2) : j["notation"].get<std::string>()) << '\n';
        } else if (expand->parsed()) {
            const json j = svc->expand_add(sid, base, source);
            out << (g.json ? j.dump(2) : j["notation"].get<std::string>()) << '\n';
        } else if (chain->parsed()) {
            const json j = svc->chain_index(sid, lang);
            out << (g.json ? j.dump(2) + "\n" : j["tsv"].get<std::string>());
        } else if (relative->parsed()) {
            const json j = svc->relative_index(sid, lang);
            out << (g.json ? j.dump(2) + "\n" : j["tsv"].get<std::string>());
        } else if (skos->parsed()) {
            out << svc->skos(sid);
        } else if (authority->parsed()) {
            const json j = svc->authority(sid, notations, split_commas(langs));
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                out << j["text"].get<std::string>();
            }
            for (const auto& d : j["diagnostics"]) err << "classweave: " << d.get<std::string>() << '\n';
            if (j["records"].empty()) return 1;
        } else if (map->parsed()) {
            const json j = svc->map(src_scheme, notation, target);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else if (!j["mapped"].get<bool>()) {
                out << "no mapping\n";
            } else {
                out << j["target_notation"].get<std::string>() << ' ' << j["exactness"].get<std::string>();
                if (j["hops_broadened"].get<std::size_t>() > 0) out << ' ' << str(j["hops_broadened"]);
                out << '\n';
            }
        } else if (suggest->parsed()) {
            const json j = svc->suggest(sid, text, top_k, lang);
            if (g.json) {
                out << j.dump(2) << '\n';
            } else {
                std::vector<std::vector<std::string>> rows{{"Notation", "Caption", "Score"}};
                for (const auto& r : j["rows"]) rows.push_back({r["notation"], r["caption"], str(r["score"])});
                print_table(out, rows);
            }
        } else if (serve->parsed()) {
            httplib::Server server;
            install_routes(server, *svc);
            const auto& cfg = svc->config();
            if (!server.bind_to_port(cfg.host, cfg.port)) {
                err << "classweave: cannot bind " << cfg.host << ':' << cfg.port << '\n';
                return 1;
            }
            err << "listening on http://" << cfg.host << ':' << cfg.port << '\n';
            if (!server.listen_after_bind()) return 1;
        }
    } catch (const ParseError& e) {
        err << "classweave: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "classweave: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace classweave
