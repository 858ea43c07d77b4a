#pragma once
// One entry point per capability, returning structured records. The CLI and
// the HTTP routes are thin wrappers over this class.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "classweave/interchange.hpp"
#include "classweave/retrieval.hpp"

namespace classweave {

using json = nlohmann::json;

struct ServiceConfig {
    std::vector<std::string> scheme_paths;
    std::vector<std::string> docs_paths;
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string default_lang = "en";
    std::size_t min_hits_default = 10;
    std::string default_scheme;  // first loaded scheme when empty

    // Relative paths resolve against `base_dir`.
    static ServiceConfig from_json(const json& j, const std::string& base_dir = {});
    static ServiceConfig from_file(const std::string& path);
    // Empty when valid.
    std::string problem() const;
};

json to_json(const HitRow& r);
json to_json(const Diagnostic& d);

class Service {
public:
    // Loads schemes and documents. Check fatal() before serving.
    explicit Service(ServiceConfig config);

    const ServiceConfig& config() const noexcept { return config_; }
    const Catalog& catalog() const noexcept { return catalog_; }
    bool fatal() const noexcept { return catalog_.fatal; }
    const std::vector<Diagnostic>& diagnostics() const noexcept { return catalog_.diagnostics; }
    const IngestReport& initial_ingest() const noexcept { return initial_ingest_; }

    // Empty `scheme` means the default scheme. Throws NotFoundError.
    const Scheme& scheme(const std::string& id) const;
    const Collection& collection(const std::string& id) const;

    json schemes() const;
    json validate() const;
    json get_class(const std::string& scheme, const std::string& notation, const std::string& lang) const;
    json search(const std::string& scheme, const std::string& query, const std::string& lang) const;
    json browse(const std::string& scheme, const std::string& notation, bool aggregate, const std::string& lang) const;
    json explode(const std::string& scheme, const std::string& notation) const;
    json broaden(const std::string& scheme, const std::string& notation, std::size_t min_hits) const;
    json related(const std::string& scheme, const std::string& notation, const std::string& lang) const;
    json suggest(const std::string& scheme, const std::string& text, std::size_t top_k, const std::string& lang) const;
    json authority(const std::string& scheme, const std::vector<std::string>& notations,
                   const std::vector<std::string>& langs) const;
    std::string skos(const std::string& scheme) const;
    json map(const std::string& source, const std::string& notation, const std::string& target) const;
    json synthesize(const std::string& scheme, const std::string& main,
                    const std::vector<std::pair<std::string, std::string>>& auxiliaries) const;
    json expand_add(const std::string& scheme, const std::string& base, const std::string& source) const;
    json chain_index(const std::string& scheme, const std::string& lang) const;
    json relative_index(const std::string& scheme, const std::string& lang) const;
    // Body holds D records. The new documents become visible atomically.
    json ingest(const std::string& scheme, const std::string& body);

    std::string lang_or_default(const std::string& lang) const;

private:
    Collection& collection_mut(const std::string& id);
    std::string resolve_id(const std::string& id) const;

    ServiceConfig config_;
    Catalog catalog_;
    std::map<std::string, std::unique_ptr<Collection>> collections_;
    IngestReport initial_ingest_;
};

}  // namespace classweave
