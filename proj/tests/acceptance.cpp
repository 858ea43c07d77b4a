// Acceptance run: one PASS or FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance <fixtures-dir> <property-test-binary>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "classweave/cli.hpp"
#include "classweave/errors.hpp"
#include "classweave/indexes.hpp"
#include "classweave/interchange.hpp"
#include "classweave/retrieval.hpp"
#include "classweave/synthesis.hpp"

using namespace classweave;

namespace {

std::string fixtures;
std::string property_binary;

struct Failure {
    std::string what;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

template <typename A, typename B>
void expect_eq(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
        std::ostringstream s;
        s << what << ": got " << got << ", want " << want;
        throw Failure{s.str()};
    }
}

std::string path(const std::string& rel) { return fixtures + "/" + rel; }

const Catalog& catalog() {
    static const Catalog c = load_catalog({path("udc/physics.tsv"), path("udc/rabbit.tsv"), path("udc/general.tsv"),
                                           path("udc/auxiliaries.tsv"), path("ddc.tsv"), path("nebis.tsv"),
                                           path("bc2.tsv"), path("lcc.tsv"), path("concordance.tsv")});
    return c;
}

const Scheme& scheme(const std::string& id) {
    auto s = catalog().scheme(id);
    if (!s) throw Failure{"scheme " + id + " did not load"};
    return *s;
}

std::vector<std::string> cli_lines(std::vector<std::string> args) {
    args.insert(args.begin(), {"classweave", "--config", path("classweave.json")});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    expect(code == 0, "classweave exited " + std::to_string(code) + ": " + err.str());
    std::vector<std::string> lines;
    std::istringstream in(out.str());
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines;
}

// Whitespace-separated fields of a table line.
std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

const std::vector<std::string> physics_classes{
    "539.1",       "539.12",      "539.123/.124", "539.123",   "539.123.6",  "539.124",
    "539.124.6",   "539.125/.126", "539.125",     "539.125.4", "539.125.46", "539.125.5",
    "539.125.56",  "539.126.3",   "539.126.4",    "539.126.6"};

// Specificity of a main-table notation: a span sits half a level above the
// digits it shares with its endpoints.
double depth(const NotationExpr& e) {
    if (const auto* s = e.get_if<Simple>()) return static_cast<double>(s->digits.size());
    const auto& sp = e.as<Span>();
    return static_cast<double>(sp.left.size()) - 0.5;
}

bool contains(const NotationExpr& outer, const NotationExpr& inner) {
    auto holds = [&](const Simple& x) {
        if (const auto* s = outer.get_if<Simple>()) return is_descendant(*s, x);
        return span_covers(outer.as<Span>(), x);
    };
    if (const auto* s = inner.get_if<Simple>()) return holds(*s) && !(outer == inner);
    const auto& sp = inner.as<Span>();
    if (outer == inner) return false;
    if (const auto* s = outer.get_if<Simple>()) return is_descendant(*s, Simple{sp.left}) && is_descendant(*s, Simple{sp.right});
    return false;
}

// Parent by indentation: the most specific other listed class containing it.
std::optional<std::string> indented_parent(const std::string& n) {
    const NotationExpr e = parse(n);
    std::optional<std::string> best;
    double best_depth = -1;
    for (const auto& other : physics_classes) {
        const NotationExpr o = parse(other);
        if (contains(o, e) && depth(o) > best_depth) {
            best = other;
            best_depth = depth(o);
        }
    }
    return best;
}

void physics_excerpt() {
    const auto start = std::chrono::steady_clock::now();
    const Scheme& udc = scheme("UDC");
    for (const auto& n : physics_classes) {
        expect_eq(format(parse(n)), n, "round-trip");
        expect(udc.get_class(n) != nullptr, n + " missing from fixture");
        const auto want = indented_parent(n);
        const auto got = udc.parent_of(n);
        expect_eq(got.value_or("root"), want.value_or("root"), "parent of " + n);
        std::set<std::string> kids, want_kids;
        for (const ClassRecord* c : udc.children_of(n)) {
            if (std::find(physics_classes.begin(), physics_classes.end(), c->notation) != physics_classes.end())
                kids.insert(c->notation);
        }
        for (const auto& m : physics_classes) {
            if (indented_parent(m) == n) want_kids.insert(m);
        }
        expect(kids == want_kids, "children of " + n);
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    expect(ms.count() < 1000, "took " + std::to_string(ms.count()) + " ms");
}

void broadening_chain() {
    std::vector<std::string> chain;
    std::optional<Simple> cur = Simple{parse("539.125.46").as<Simple>()};
    while ((cur = broaden(*cur))) chain.push_back(format(NotationExpr(*cur)));
    chain.push_back("root");
    const std::vector<std::string> want{"539.125.4", "539.125", "539.12", "539.1", "539", "53", "5", "root"};
    expect(chain == want, "chain mismatch");
}

void add_instruction() {
    const Scheme& ddc = scheme("DDC");
    expect(!ddc.add_instructions().empty(), "no add instruction");
    const AddInstruction& instr = ddc.add_instructions().front();
    expect_eq(format(NotationExpr(expand_add(instr, Simple{"59576"}))), std::string("565.76"), "Coleoptera");
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> last(2, 9), len(0, 4), dig(0, 9);
    for (int i = 0; i < 1000; ++i) {
        std::string src = "5957" + std::to_string(last(rng));
        for (int n = len(rng); n > 0; --n) src += static_cast<char>('0' + dig(rng));
        // Strip the shared prefix, append the rest to the base, re-dot.
        std::string digits = "5657" + src.substr(4), dotted;
        for (std::size_t k = 0; k < digits.size(); ++k) {
            if (k > 0 && k % 3 == 0) dotted += '.';
            dotted += digits[k];
        }
        expect_eq(format(NotationExpr(expand_add(instr, Simple{src}))), dotted, "source " + src);
    }
}

void synthesis() {
    const Scheme& udc = scheme("UDC");
    const std::vector<std::tuple<std::string, std::string, std::string>> rows{
        {"027", "469", "027(469)"}, {"338.48", "469", "338.48(469)"}, {"726", "469", "726(469)"},
        {"91", "469", "91(469)"},   {"94", "469", "94(469)"},         {"06", "7", "06(7)"},
        {"06", "41", "06(41)"},     {"06", "430", "06(430)"},         {"070", "7", "070(7)"},
        {"070", "41", "070(41)"},   {"070", "430", "070(430)"}};
    for (const auto& [main, place, want] : rows) {
        expect_eq(format(apply_auxiliary(udc, udc.parse(main), "place", place)), want, main + " + " + place);
    }
}

void facet_formula() {
    const FacetFormula f = scheme("BC2").facet_formulas().at("literature");
    const std::vector<std::pair<std::string, FacetComponents>> printed{
        {"A-1aa031", {{"language", "A"}, {"form", "-1"}, {"period", "aa"}, {"document", "031"}}},
        {"B-2ac02", {{"language", "B"}, {"form", "-2"}, {"period", "ac"}, {"document", "02"}}},
        {"C-1ac03", {{"language", "C"}, {"form", "-1"}, {"period", "ac"}, {"document", "03"}}},
        {"C-3ac031", {{"language", "C"}, {"form", "-3"}, {"period", "ac"}, {"document", "031"}}}};
    for (const auto& [text, comps] : printed) {
        expect_eq(synthesize_faceted(f, comps), text, "synthesize");
        expect(parse_faceted(f, text) == comps, "parse " + text);
    }
    std::mt19937 rng(7);
    auto roll = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int i = 0; i < 500; ++i) {
        FacetComponents comps;
        for (const auto& slot : f.slots) {
            if (roll(0, 9) < 3) continue;
            std::string t;
            const int n = roll(1, 3);
            switch (slot.marker) {
                case Marker::uppercase_letters: for (int k = 0; k < n; ++k) t += static_cast<char>('A' + roll(0, 25)); break;
                case Marker::lowercase_letters: for (int k = 0; k < n; ++k) t += static_cast<char>('a' + roll(0, 25)); break;
                case Marker::dash_digits:
                    t = "-";
                    for (int k = 0; k < n; ++k) t += static_cast<char>('1' + roll(0, 8));
                    break;
                case Marker::zero_led_digits:
                    t = "0";
                    for (int k = 1; k < n; ++k) t += static_cast<char>('0' + roll(0, 9));
                    break;
            }
            comps[slot.name] = t;
        }
        if (comps.empty()) comps["language"] = "Q";
        const std::string text = synthesize_faceted(f, comps);
        expect(parse_faceted(f, text) == comps, "random map " + text);
    }
}

void term_search_tables() {
    const std::vector<std::pair<std::string, std::string>> hadrons{
        {"539.12", "132"},  {"539.125/.126", "58"}, {"539.125", "38"},  {"539.125.4", "5"},   {"539.125.46", "2"},
        {"539.125.5", "7"}, {"539.125.56", "1"},    {"539.126.3", "9"}, {"539.126.5", "11"}, {"539.126.6", "6"}};
    const std::vector<std::string> rabbit{
        "569.32 Zoology: Rodentia and Lagomorpha 7",
        "632.935.7 Protection of Crops 3",
        "636.92 Animal Husbandry: Domestic Rabbits 38",
        "636.92.045 Animal Husbandry: Domestic Rabbits, Pets 10",
        "636.932 Animal Husbandry: Rodents kept for fur 9",
        "639.112 Hunting: Small game generally 22",
        "641.8 Cooking: Main dishes 2",
        "677.534 Textile industry: Hare fur, Rabbit fur 8"};

    const auto h = cli_lines({"search", "hadrons"});
    expect_eq(h.size(), hadrons.size() + 2, "hadrons table lines");
    expect_eq(h[0], std::string("hadrons"), "hadrons heading");
    for (std::size_t i = 0; i < hadrons.size(); ++i) {
        const auto f = fields(h[i + 2]);
        expect_eq(f.front(), hadrons[i].first, "hadrons row notation");
        expect_eq(f.back(), hadrons[i].second, "hadrons row count for " + hadrons[i].first);
    }

    const auto r = cli_lines({"search", "rabbit"});
    expect_eq(r.size(), rabbit.size() + 2, "rabbit table lines");
    for (std::size_t i = 0; i < rabbit.size(); ++i) {
        std::string joined;
        for (const auto& w : fields(r[i + 2])) joined += (joined.empty() ? "" : " ") + w;
        expect_eq(joined, rabbit[i], "rabbit row");
    }

    // Aggregates against a subtree sum of the direct counts.
    Collection store(catalog().scheme("UDC"));
    store.ingest(load_catalog({path("udc/documents.tsv")}).documents);
    const Scheme& udc = scheme("UDC");
    std::function<std::size_t(const std::string&)> subtree = [&](const std::string& n) {
        std::size_t total = store.direct_hits(n);
        for (const ClassRecord* c : udc.children_of(n)) total += subtree(c->notation);
        return total;
    };
    for (const auto& row : store.search_term("hadrons", "en")) {
        expect_eq(row.aggregate_hits, subtree(row.notation), "aggregate of " + row.notation);
    }
    expect_eq(store.aggregate_hits("539.125"), std::size_t{53}, "aggregate of 539.125");
}

void authority_record() {
    const AuthorityExport e = export_authority(scheme("NEBIS"), {"539.12.000.1"}, {"de", "en", "fr"});
    std::multiset<std::string> got;
    std::istringstream in(e.text);
    for (std::string l; std::getline(in, l);) {
        if (l.rfind("Notation\t", 0) == 0) continue;
        const auto tab = l.find('\t');
        const auto last = l.rfind('\t');
        got.insert(l.substr(0, tab) + "|" + l.substr(tab + 1, last - tab - 1));
    }
    const std::multiset<std::string> want{
        "Term|HADRONEN (TEILCHENPHYSIK)",
        "Term|HADRONS (PARTICLE PHYSICS)",
        "Term|HADRONS (PHYSIQUE DES PARTICULES ÉLÉMENTAIRES)",
        "Broader term|ELEMENTARTEILCHENPHYSIK : 539.12",
        "Broader term|PARTICLE PHYSICS : 539.12",
        "Broader term|PHYSIQUE DES PARTICULES ÉLÉMENTAIRES : 539.12",
        "Narrower term|BARYONEN (TEILCHENPHYSIK) : 539.12.000.11",
        "Narrower term|BARYONS (PARTICLE PHYSICS) : 539.12.000.11",
        "Narrower term|BARYONS (PHYSIQUE DES PARTICULES ÉLÉMENTAIRES) : 539.12.000.11",
        "Narrower term|MESONEN (TEILCHENPHYSIK) : 539.126",
        "Narrower term|MESONS (PARTICLE PHYSICS) : 539.126",
        "Narrower term|MÉSONS (PHYSIQUE DES PARTICULES ÉLÉMENTAIRES) : 539.126",
        "Related term|NUKLEONEN (TEILCHENPHYSIK) : 539.125",
        "Related term|NUCLEONS (PARTICLE PHYSICS) : 539.125",
        "Related term|NUCLÉONS (PHYSIQUE DES PARTICULES ÉLÉMENTAIRES) : 539.125",
        "System No|000015327"};
    expect(got == want, "term/BT/NT/RT multiset differs");
}

void index_oracles() {
    for (const auto& id : catalog().scheme_order) {
        const Scheme& s = scheme(id);
        for (const auto& lang : s.languages()) {
            for (const auto& entry : chain_index(s, lang)) {
                std::vector<std::string> walk;
                for (std::optional<std::string> cur = entry.notation; cur; cur = s.parent_of(*cur)) {
                    const ClassRecord& rec = s.require_class(*cur);
                    walk.push_back(s.caption(rec, lang).text);
                }
                expect(walk == entry.chain, id + " chain for " + entry.notation);
            }
        }
    }
    const RelativeIndex idx = relative_index(scheme("DDC"), "en");
    expect(idx.count("Marriage") == 1, "no Marriage entry");
    std::set<std::string> got;
    for (const auto& p : idx.at("Marriage")) got.insert(p.notation);
    const std::set<std::string> want{"306.81", "173", "205.63", "346.016", "392.5", "398.27", "700.454.3"};
    expect_eq(idx.at("Marriage").size(), std::size_t{7}, "Marriage postings");
    expect(got == want, "Marriage notations");
}

void skos_export() {
    for (const auto& id : catalog().scheme_order) {
        const Scheme& s = scheme(id);
        const std::string text = export_skos(s);
        const Catalog again = load_catalog({path("udc/physics.tsv"), path("udc/rabbit.tsv"), path("udc/general.tsv"),
                                            path("udc/auxiliaries.tsv"), path("ddc.tsv"), path("nebis.tsv"),
                                            path("bc2.tsv"), path("lcc.tsv")});
        expect(text == export_skos(*again.scheme(id)), id + " export differs between runs");
        std::set<std::tuple<std::string, std::string, std::string>> triples;
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);) {
            const auto a = l.find(' '), b = l.find(' ', a + 1);
            triples.insert({l.substr(0, a), l.substr(a + 1, b - a - 1), l.substr(b + 1, l.size() - b - 3)});
        }
        const std::string ns = "<http://www.w3.org/2004/02/skos/core#";
        std::size_t concepts = 0;
        for (const auto& [subj, pred, obj] : triples) {
            if (pred == ns + "broader>") expect(triples.count({obj, ns + "narrower>", subj}), "broader without narrower");
            if (pred == ns + "narrower>") expect(triples.count({obj, ns + "broader>", subj}), "narrower without broader");
            if (pred == ns + "related>") expect(triples.count({obj, ns + "related>", subj}), "asymmetric related");
            if (obj == ns + "Concept>") ++concepts;
        }
        expect_eq(concepts, s.size(), id + " concept count");
    }
}

void pivot() {
    const auto& udc = scheme("UDC");
    const Translation exact = catalog().concordance.translate("UDC", "536", "DDC", udc.facets());
    expect(exact.target_notation == "536" && exact.exactness == Exactness::exact && exact.hops_broadened == 0,
           "536 should map exactly");
    const Translation child = catalog().concordance.translate("UDC", "536.2", "DDC", udc.facets());
    expect(child.target_notation == "536", "536.2 should fall back to 536");
    expect(child.exactness == Exactness::broader, "fallback should be broader");
    expect_eq(child.hops_broadened, std::size_t{1}, "hops for 536.2");
    const Translation deeper = catalog().concordance.translate("UDC", "536.24", "DDC", udc.facets());
    expect_eq(deeper.hops_broadened, std::size_t{2}, "hops for 536.24");
}

void property_suites() {
    expect(!property_binary.empty(), "property binary not given");
    const std::string cmd = "\"" + property_binary + "\" --minimal > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    expect(rc == 0, "property binary exited " + std::to_string(rc));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <fixtures-dir> [property-test-binary]\n";
        return 2;
    }
    fixtures = argv[1];
    if (argc > 2) property_binary = argv[2];

    const std::vector<std::pair<std::string, std::function<void()>>> criteria{
        {"physics excerpt round-trip and hierarchy", physics_excerpt},
        {"broadening chain of 539.125.46", broadening_chain},
        {"add-to-base instruction with 1000 random sources", add_instruction},
        {"place compounds reproduced byte-exact", synthesis},
        {"faceted notation round-trip with 500 random maps", facet_formula},
        {"hadrons and rabbit search tables with aggregates", term_search_tables},
        {"authority record term multiset", authority_record},
        {"chain index and relative index oracles", index_oracles},
        {"SKOS determinism, reciprocity and concept count", skos_export},
        {"concordance pivot with broadening fallback", pivot},
        {"randomized property suites", property_suites},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        try {
            check();
            std::cout << "PASS  " << name << '\n';
        } catch (const Failure& f) {
            ++failed;
            std::cout << "FAIL  " << name << ": " << f.what << '\n';
        } catch (const std::exception& e) {
            ++failed;
            std::cout << "FAIL  " << name << ": " << e.what() << '\n';
        }
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
