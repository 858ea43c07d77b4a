#include <doctest.h>

#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "classweave/errors.hpp"
#include "classweave/retrieval.hpp"
#include "support.hpp"

using namespace classweave;

namespace {

const Collection& store() { return cwtest::udc_store(); }

std::map<std::string, std::size_t> direct_counts(const std::vector<HitRow>& rows) {
    std::map<std::string, std::size_t> m;
    for (const auto& r : rows) m[r.notation] = r.direct_hits;
    return m;
}

// Stored ancestors-or-self of `key` by parent_of.
std::set<std::string> lineage(const Scheme& s, std::string key) {
    std::set<std::string> out;
    std::optional<std::string> cur = s.get_class(key) ? std::optional<std::string>(key) : s.parent_of(key);
    while (cur) {
        out.insert(*cur);
        cur = s.parent_of(*cur);
    }
    return out;
}

// Brute force: a document is under a stored class when some component of one
// of its classmarks has that class in its parent_of lineage.
std::set<std::string> explode_oracle(const std::string& notation) {
    const Scheme& udc = cwtest::scheme("UDC");
    std::set<std::string> out;
    for (const auto& doc : cwtest::documents()) {
        for (const auto& mark : doc.classmarks) {
            for (const auto& c : decompose(udc.parse(mark))) {
                if (lineage(udc, c.canonical).count(notation)) out.insert(doc.doc_id);
            }
        }
    }
    return out;
}

std::size_t subtree_sum(const Scheme& s, const Collection& c, const std::string& notation) {
    std::size_t n = c.direct_hits(notation);
    for (const ClassRecord* child : s.children_of(notation)) n += subtree_sum(s, c, child->notation);
    return n;
}

}  // namespace

TEST_CASE("term search over rabbit") {
    const auto rows = store().search_term("rabbit", "en");
    const std::map<std::string, std::size_t> expected{{"569.32", 7},  {"632.935.7", 3}, {"636.92", 38},
                                                      {"636.92.045", 10}, {"636.932", 9}, {"639.112", 22},
                                                      {"641.8", 2},   {"677.534", 8}};
    CHECK(direct_counts(rows) == expected);
    REQUIRE(rows.size() == 8);
    CHECK(rows.front().notation == "569.32");
    CHECK(rows.back().notation == "677.534");
    std::size_t total = 0;
    std::set<std::string> contexts;
    for (const auto& r : rows) {
        total += r.direct_hits;
        contexts.insert(r.context);
    }
    CHECK(total == 99);
    CHECK(contexts.size() >= 4);
    CHECK(rows[0].context == "Zoology");
    CHECK(rows[2].context == "Animal Husbandry");
}

TEST_CASE("term search over hadrons") {
    const auto rows = store().search_term("hadrons", "en");
    const std::vector<std::pair<std::string, std::size_t>> expected{
        {"539.12", 132},  {"539.125/.126", 58}, {"539.125", 38},  {"539.125.4", 5},    {"539.125.46", 2},
        {"539.125.5", 7}, {"539.125.56", 1},    {"539.126.3", 9}, {"539.126.5", 11}, {"539.126.6", 6}};
    REQUIRE(rows.size() == expected.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].notation == expected[i].first);
        CHECK(rows[i].direct_hits == expected[i].second);
    }
    CHECK(rows[0].role == RowRole::broader);
    CHECK(rows[1].role == RowRole::match);
    CHECK(rows[2].role == RowRole::narrower);
    CHECK(store().search_term("zzz", "en").empty());
}

TEST_CASE("aggregate counts") {
    const Scheme& udc = cwtest::scheme("UDC");
    CHECK(store().aggregate_hits("539.125") == 53);
    CHECK(store().aggregate_hits("539.125") == 38 + 5 + 2 + 7 + 1);
    for (const ClassRecord* rec : udc.classes()) {
        CHECK(store().aggregate_hits(rec->notation) >= store().direct_hits(rec->notation));
        CHECK(store().aggregate_hits(rec->notation) == subtree_sum(udc, store(), rec->notation));
    }
    for (const auto& r : store().search_term("hadrons", "en")) {
        CHECK(r.aggregate_hits == subtree_sum(udc, store(), r.notation));
    }
}

TEST_CASE("browse") {
    const BrowseView v = store().browse("539.125", false, "en");
    REQUIRE(v.parent.has_value());
    CHECK(v.parent->notation == "539.125/.126");
    CHECK(v.self.direct_hits == 38);
    CHECK(v.self.aggregate_hits == 53);
    REQUIRE(v.children.size() == 2);
    CHECK(v.children[0].notation == "539.125.4");
    CHECK(v.children[0].direct_hits == 5);
    CHECK(v.children[1].notation == "539.125.5");
    CHECK(v.children[1].direct_hits == 7);
    CHECK(v.self.aggregate_hits == store().explode("539.125").size());

    const BrowseView top = store().browse("", true, "en");
    CHECK_FALSE(top.parent.has_value());
    CHECK_FALSE(top.children.empty());
    for (const auto& c : top.children) CHECK_FALSE(cwtest::scheme("UDC").parent_of(c.notation).has_value());
    CHECK_THROWS_AS(store().browse("999", false, "en"), NotFoundError);
}

TEST_CASE("explode matches the brute-force oracle") {
    const Scheme& udc = cwtest::scheme("UDC");
    for (const ClassRecord* rec : udc.classes()) {
        if (rec->notation.front() == '(' || rec->notation.front() == '=' || rec->notation.front() == '-') continue;
        CHECK_MESSAGE(store().explode(rec->notation) == explode_oracle(rec->notation), rec->notation);
    }
    const auto n125 = store().explode("539.125");
    CHECK(n125.size() == 53);
    const auto leaf = store().explode("539.125.46");
    CHECK(leaf.size() == 2);
    Collection c(cwtest::scheme_ptr("UDC"));
    c.ingest({{"anti", "", "en", {"539.123.6"}}, {"pos", "", "en", {"539.124.6"}}, {"had", "", "en", {"539.125"}}});
    CHECK(c.explode("539.123/.124") == std::set<std::string>{"anti", "pos"});
}

TEST_CASE("explode of composite notations") {
    CHECK(store().explode("73:75") == std::set<std::string>{"gen-004", "gen-005"});
    CHECK(store().explode("338.48(469)") == std::set<std::string>{"gen-001"});
    const auto portugal = store().explode("(469)");
    CHECK(portugal == std::set<std::string>{"gen-001", "gen-002", "gen-003", "gen-015"});
    CHECK(store().explode("(46)") == portugal);
}

TEST_CASE("broaden_until") {
    const BroadenResult r = store().broaden_until("539.125.46", 10);
    REQUIRE(r.notation.has_value());
    CHECK(*r.notation == "539.125");
    CHECK(r.hits == 53);
    const BroadenResult self = store().broaden_until("539.125.46", 1);
    CHECK(*self.notation == "539.125.46");
    const BroadenResult root = store().broaden_until("539.125.46", store().size() + 1);
    CHECK_FALSE(root.notation.has_value());
    CHECK(root.hits == store().size());
    CHECK_THROWS_AS(store().broaden_until("539.125", 0), InvalidArgumentError);
}

TEST_CASE("syndetic expansion") {
    const auto rows = store().syndetic_expand("176", "en");
    REQUIRE(rows.size() == 8);
    CHECK(rows.front().notation == "173");
    CHECK(rows.back().notation == "613.88");
    for (const auto& r : rows) CHECK(r.direct_hits == store().direct_hits(r.notation));
    CHECK(rows.front().direct_hits == 2);
    CHECK(store().syndetic_expand("539.125", "en").empty());
    CHECK_THROWS_AS(store().syndetic_expand("999", "en"), NotFoundError);
}

TEST_CASE("suggest classes") {
    const auto s = store().suggest_classes("rabbit fur for the textile industry", 5, "en");
    CHECK(std::any_of(s.begin(), s.end(), [](const Suggestion& x) { return x.notation == "677.534"; }));
    const auto h = store().suggest_classes("hadrons", 3, "en");
    REQUIRE_FALSE(h.empty());
    CHECK(h.front().notation == "539.125/.126");
    CHECK(store().suggest_classes("qqqq xxxx", 5, "en").empty());
    CHECK_THROWS_AS(store().suggest_classes("", 5, "en"), InvalidArgumentError);
    CHECK_THROWS_AS(store().suggest_classes("hadrons", 0, "en"), InvalidArgumentError);
    CHECK(tokenize_words("Rabbit-fur, for THE") == std::vector<std::string>{"rabbit", "fur", "for", "the"});
}

TEST_CASE("ingest posts every component") {
    Collection c(cwtest::scheme_ptr("UDC"));
    const IngestReport r = c.ingest({{"a", "", "en", {"338.48(469)"}},
                                     {"b", "", "en", {"73:75"}},
                                     {"a", "", "en", {"536"}},
                                     {"c", "", "en", {}},
                                     {"d", "", "en", {"53x"}},
                                     {"", "", "en", {"536"}}});
    CHECK(r.accepted == 2);
    REQUIRE(r.rejected.size() == 4);
    CHECK(r.rejected[0].doc_id == "a");
    CHECK(r.rejected[0].reason.find("duplicate") != std::string::npos);
    CHECK(r.rejected[2].reason.find("53x") != std::string::npos);
    CHECK(c.posted_under("338.48") == std::set<std::string>{"a"});
    CHECK(c.posted_under("(469)") == std::set<std::string>{"a"});
    CHECK(c.posted_under("73") == std::set<std::string>{"b"});
    CHECK(c.posted_under("75") == std::set<std::string>{"b"});
    CHECK(c.size() == 2);

    const auto snap = c.snapshot();
    for (std::size_t i = 0; i < snap->documents.size(); ++i) {
        for (const auto& comp : snap->components[i]) CHECK(snap->postings.at(comp.canonical).count(i));
    }
}

TEST_CASE("queries see whole snapshots during ingest") {
    Collection c(cwtest::scheme_ptr("UDC"));
    c.ingest(cwtest::documents());
    const std::size_t base = c.aggregate_hits("539.125");
    constexpr int batches = 40, per_batch = 5;
    std::atomic<bool> done{false};
    std::atomic<int> torn{0};
    std::vector<std::thread> readers;
    for (int t = 0; t < 4; ++t) {
        readers.emplace_back([&] {
            while (!done) {
                const auto snap = c.snapshot();
                const std::size_t docs = snap->documents.size();
                const std::size_t agg = snap->aggregate.at("539.125");
                if (agg - base != docs - cwtest::documents().size()) ++torn;
            }
        });
    }
    for (int b = 0; b < batches; ++b) {
        std::vector<ClassifiedDocument> batch;
        for (int i = 0; i < per_batch; ++i) {
            batch.push_back({"x-" + std::to_string(b) + "-" + std::to_string(i), "", "en", {"539.125.4"}});
        }
        c.ingest(batch);
    }
    done = true;
    for (auto& t : readers) t.join();
    CHECK(torn == 0);
    CHECK(c.aggregate_hits("539.125") == base + batches * per_batch);
}
