#pragma once
// Shared fixture loading for the test binaries.

#include <memory>
#include <string>
#include <vector>

#include "classweave/interchange.hpp"
#include "classweave/retrieval.hpp"

namespace cwtest {

inline std::string fixture(const std::string& rel) { return std::string(CLASSWEAVE_FIXTURES) + "/" + rel; }

inline std::vector<std::string> scheme_files() {
    return {fixture("udc/physics.tsv"), fixture("udc/rabbit.tsv"), fixture("udc/general.tsv"),
            fixture("udc/auxiliaries.tsv"), fixture("ddc.tsv"), fixture("nebis.tsv"),
            fixture("bc2.tsv"), fixture("lcc.tsv"), fixture("concordance.tsv")};
}

inline const classweave::Catalog& catalog() {
    static const classweave::Catalog c = classweave::load_catalog(scheme_files());
    return c;
}

inline const classweave::Scheme& scheme(const std::string& id) { return *catalog().scheme(id); }
inline std::shared_ptr<const classweave::Scheme> scheme_ptr(const std::string& id) { return catalog().scheme(id); }

inline std::vector<classweave::ClassifiedDocument> documents() {
    return classweave::load_catalog({fixture("udc/documents.tsv")}).documents;
}

// UDC collection with the shipped documents ingested.
inline const classweave::Collection& udc_store() {
    static const auto store = [] {
        auto c = std::make_shared<classweave::Collection>(scheme_ptr("UDC"));
        c->ingest(documents());
        return c;
    }();
    return *store;
}

}  // namespace cwtest
