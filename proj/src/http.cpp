#include "classweave/http.hpp"

#include <sstream>

#include "classweave/errors.hpp"

namespace classweave {

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(Response& res, int status, const std::string& kind, const std::string& message) {
    send_json(res, {{"error", message}, {"kind", kind}}, status);
}

template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const Request& req, Response& res) {
        try {
            f(req, res);
        } catch (const ParseError& e) {
            send_json(res, {{"error", e.what()}, {"kind", "parse"}, {"offset", e.offset()}, {"reason", e.reason()}},
                      400);
        } catch (const NotFoundError& e) {
            send_error(res, 404, "not-found", e.what());
        } catch (const OutOfSpanError& e) {
            send_error(res, 400, "out-of-span", e.what());
        } catch (const UnsupportedVariantError& e) {
            send_error(res, 400, "unsupported-variant", e.what());
        } catch (const InvalidArgumentError& e) {
            send_error(res, 400, "invalid-argument", e.what());
        } catch (const StructuralError& e) {
            send_error(res, 500, "structural", e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
        }
    };
}

std::string param(const Request& req, const char* name, const std::string& fallback = {}) {
    return req.has_param(name) ? req.get_param_value(name) : fallback;
}

std::string required(const Request& req, const char* name) {
    if (!req.has_param(name)) throw InvalidArgumentError(std::string("missing query parameter '") + name + "'");
    return req.get_param_value(name);
}

std::size_t count_param(const Request& req, const char* name, std::size_t fallback) {
    if (!req.has_param(name)) return fallback;
    const std::string v = req.get_param_value(name);
    std::size_t used = 0;
    unsigned long n = 0;
    try {
        n = std::stoul(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw InvalidArgumentError(std::string(name) + " must be a count, got '" + v + "'");
    return n;
}

bool flag_param(const Request& req, const char* name) {
    const std::string v = param(req, name);
    return v == "1" || v == "true" || v == "yes";
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

// Path segments arrive decoded; a client that double-encodes still works.
std::string path_notation(const Request& req) {
    std::string n = req.matches[1];
    return n.find('%') != std::string::npos ? percent_decode(n) : n;
}

}  // namespace

void install_routes(httplib::Server& server, Service& service) {
    Service* svc = &service;

    server.Get("/api/schemes", guarded([svc](const Request&, Response& res) { send_json(res, svc->schemes()); }));
    server.Get("/api/validate", guarded([svc](const Request&, Response& res) { send_json(res, svc->validate()); }));

    server.Get(R"(/api/classes/(.+))", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->get_class(param(req, "scheme"), path_notation(req), param(req, "lang")));
               }));
    server.Get("/api/classes", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->get_class(param(req, "scheme"), required(req, "n"), param(req, "lang")));
               }));

    server.Get("/api/search", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->search(param(req, "scheme"), required(req, "q"), param(req, "lang")));
               }));
    server.Get("/api/browse", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->browse(param(req, "scheme"), param(req, "n"), flag_param(req, "aggregate"),
                                              param(req, "lang")));
               }));
    server.Get("/api/explode", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->explode(param(req, "scheme"), required(req, "n")));
               }));
    server.Get("/api/broaden", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->broaden(param(req, "scheme"), required(req, "n"),
                                               count_param(req, "min_hits", svc->config().min_hits_default)));
               }));
    server.Get("/api/related", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->related(param(req, "scheme"), required(req, "n"), param(req, "lang")));
               }));
    server.Post("/api/suggest", guarded([svc](const Request& req, Response& res) {
                    send_json(res, svc->suggest(param(req, "scheme"), req.body, count_param(req, "top_k", 5),
                                                param(req, "lang")));
                }));

    auto authority = [svc](const Request& req, Response& res, std::vector<std::string> notations) {
        send_json(res, svc->authority(param(req, "scheme"), notations, split_commas(param(req, "langs"))));
    };
    server.Get(R"(/api/authority/(.+))", guarded([authority](const Request& req, Response& res) {
                   authority(req, res, {path_notation(req)});
               }));
    server.Get("/api/authority", guarded([authority](const Request& req, Response& res) {
                   std::vector<std::string> ns;
                   for (std::size_t i = 0; i < req.get_param_value_count("n"); ++i) ns.push_back(req.get_param_value("n", i));
                   if (ns.empty()) throw InvalidArgumentError("missing query parameter 'n'");
                   authority(req, res, ns);
               }));

    server.Get("/api/skos", guarded([svc](const Request& req, Response& res) {
                   res.set_content(svc->skos(param(req, "scheme")), "application/n-triples; charset=utf-8");
               }));

    server.Post("/api/documents", guarded([svc](const Request& req, Response& res) {
                    send_json(res, svc->ingest(param(req, "scheme"), req.body));
                }));

    server.Get("/api/map", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->map(required(req, "src"), required(req, "n"), required(req, "tgt")));
               }));

    server.Get("/api/synthesize", guarded([svc](const Request& req, Response& res) {
                   std::vector<std::pair<std::string, std::string>> aux;
                   for (std::size_t i = 0; i < req.get_param_value_count("aux"); ++i) {
                       const std::string a = req.get_param_value("aux", i);
                       const auto eq = a.find('=');
                       if (eq == std::string::npos || eq == 0) {
                           throw InvalidArgumentError("aux must be facet=value, got '" + a + "'");
                       }
                       aux.emplace_back(a.substr(0, eq), a.substr(eq + 1));
                   }
                   send_json(res, svc->synthesize(param(req, "scheme"), required(req, "main"), aux));
               }));
    server.Get("/api/expand-add", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->expand_add(param(req, "scheme"), required(req, "base"), required(req, "source")));
               }));
    server.Get("/api/chain-index", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->chain_index(param(req, "scheme"), param(req, "lang")));
               }));
    server.Get("/api/relative-index", guarded([svc](const Request& req, Response& res) {
                   send_json(res, svc->relative_index(param(req, "scheme"), param(req, "lang")));
               }));
}

}  // namespace classweave
