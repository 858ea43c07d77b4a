#include <doctest.h>

#include "classweave/errors.hpp"
#include "classweave/notation.hpp"

using namespace classweave;

namespace {

FacetRegistry udc_facets() {
    return FacetRegistry({{"place", "(", ")"}, {"language", "=", ""}, {"special", "-", ""}});
}

std::size_t error_offset(std::string_view text, const FacetRegistry& f = udc_facets()) {
    try {
        parse(text, f);
    } catch (const ParseError& e) {
        return e.offset();
    }
    FAIL("expected a parse error for '" << std::string(text) << "'");
    return 0;
}

}  // namespace

TEST_CASE("simple numbers drop their dots") {
    CHECK(parse("539.125.46") == NotationExpr(Simple{"53912546"}));
    CHECK(format(Simple{"53912546"}) == "539.125.46");
    CHECK(format(Simple{"5"}) == "5");
    CHECK(format(Simple{"06"}) == "06");
    CHECK(canonicalize("53912546") == "539.125.46");
    CHECK(canonicalize(" 536 ") == "536");
}

TEST_CASE("spans expand the suffix against the left endpoint") {
    CHECK(parse("539.123/.124") == NotationExpr(Span{"539123", "539124"}));
    CHECK(format(Span{"539123", "539124"}) == "539.123/.124");
    CHECK(format(Span{"539125", "539126"}) == "539.125/.126");
    CHECK(parse("539.123/539.124") == parse("539.123/.124"));
    CHECK(format(Span{"5951", "5959"}) == "595.1/.9");
    CHECK(parse("595.1/.9") == NotationExpr(Span{"5951", "5959"}));
    CHECK(format(Span{"5951", "5969"}) == "595.1/596.9");
    CHECK_THROWS_AS(parse("539.124/.123"), ParseError);
    CHECK_THROWS_AS(parse("539.12/.124"), ParseError);
}

TEST_CASE("compounds carry one auxiliary per facet") {
    const auto f = udc_facets();
    const NotationExpr e = parse("338.48(469)", f);
    REQUIRE(e.is<Compound>());
    const auto& c = e.as<Compound>();
    CHECK(std::get<Simple>(c.main).digits == "33848");
    REQUIRE(c.auxiliaries.size() == 1);
    CHECK(c.auxiliaries[0].facet == "place");
    CHECK(c.auxiliaries[0].digits == "469");
    CHECK(format(e) == "338.48(469)");
    CHECK(format(parse("06(430)", f)) == "06(430)");
    CHECK(format(parse("91(469)=821.221", f)) == "91(469)=821.221");
    CHECK_THROWS_AS(parse("06(430)(41)", f), ParseError);
}

TEST_CASE("standalone auxiliaries") {
    const auto f = udc_facets();
    const NotationExpr e = parse("=821.221", f);
    REQUIRE(e.is<Auxiliary>());
    CHECK(e.as<Auxiliary>().facet == "language");
    CHECK(format(e) == "=821.221");
    CHECK(format(parse("(469)", f)) == "(469)");
}

TEST_CASE("relators split left to right and flatten") {
    const NotationExpr colon = parse("73:75");
    REQUIRE(colon.is<Relation>());
    CHECK(colon.as<Relation>().op == Relator::colon);
    CHECK(colon.as<Relation>().operands.size() == 2);
    CHECK(format(colon) == "73:75");

    const NotationExpr plus = parse("73+75");
    REQUIRE(plus.is<Relation>());
    CHECK(plus.as<Relation>().op == Relator::plus);

    const NotationExpr three = parse("73:75:91");
    CHECK(three.as<Relation>().operands.size() == 3);
    CHECK(format(parse("73+75:91")) == "73+75:91");
    CHECK_FALSE(parse("73:75") == parse("75:73"));
}

TEST_CASE("parse errors name the offset") {
    CHECK(error_offset("") == 0);
    CHECK(error_offset("   ") == 0);
    CHECK(error_offset("539.12.") == 6);
    CHECK(error_offset("338.48(469") == 6);
    CHECK(error_offset("338.48[469]") == 6);
    CHECK(error_offset("53a") == 2);
    CHECK(error_offset("73:") == 3);
    CHECK(error_offset(":75") == 0);
    CHECK(error_offset("539.123/.12") == 7);
    CHECK(error_offset("539.123/.124x") == 12);
}

TEST_CASE("opaque keys only when allowed") {
    CHECK_THROWS_AS(parse("QD241-441"), ParseError);
    const NotationExpr e = parse("QD241-441", {}, {true});
    REQUIRE(e.is<OpaqueKey>());
    CHECK(format(e) == "QD241-441");
    CHECK(format(parse("PIJ  BK", {}, {true})) == "PIJ BK");
    CHECK(parse("536", {}, {true}).is<Simple>());
}

TEST_CASE("local segments keep their own place below the main number") {
    const NotationExpr e = parse("539.12.000.1");
    CHECK(format(e) == "539.12.000.1");
    CHECK(format(parse("539.12.000.11")) == "539.12.000.11");
    CHECK_FALSE(parse("539.12.000.1") == parse("539.120.001"));
    CHECK(is_descendant(Simple{"53912"}, e.as<Simple>()));
    CHECK(is_descendant(e.as<Simple>(), parse("539.12.000.11").as<Simple>()));
}

TEST_CASE("broaden removes the last digit") {
    CHECK(broaden(Simple{"53912546"}) == Simple{"5391254"});
    CHECK(broaden(Simple{"5391"}) == Simple{"539"});
    CHECK_FALSE(broaden(Simple{"5"}).has_value());
    CHECK_THROWS_AS(broaden(parse("539.123/.124")), UnsupportedVariantError);

    const auto f = udc_facets();
    CHECK(format(*broaden_any(parse("06(430)", f))) == "06");
    CHECK(format(*broaden_any(parse("539.125/.126"))) == "539.12");
    CHECK_FALSE(broaden_any(parse("73:75")).has_value());
}

TEST_CASE("descendants and span coverage") {
    CHECK(is_descendant(Simple{"53912"}, Simple{"53912546"}));
    CHECK_FALSE(is_descendant(Simple{"539125"}, Simple{"5391263"}));
    CHECK_FALSE(is_descendant(Simple{"539"}, Simple{"539"}));

    const Span leptons{"539123", "539124"};
    CHECK(span_covers(leptons, Simple{"5391236"}));
    CHECK(span_covers(leptons, Simple{"5391246"}));
    CHECK(span_covers(leptons, Simple{"539123"}));
    CHECK_FALSE(span_covers(leptons, Simple{"539125"}));
    CHECK_FALSE(span_covers(leptons, Simple{"53912"}));
}

TEST_CASE("decompose flattens components") {
    const auto f = udc_facets();
    auto c = decompose(parse("338.48(469)", f));
    REQUIRE(c.size() == 2);
    CHECK(c[0].kind == "main");
    CHECK(c[0].digits == "33848");
    CHECK(c[1].kind == "place");
    CHECK(c[1].digits == "469");
    CHECK(c[1].canonical == "(469)");

    c = decompose(parse("73:75"));
    REQUIRE(c.size() == 2);
    CHECK(c[0].digits == "73");
    CHECK(c[1].digits == "75");

    c = decompose(parse("536"));
    REQUIRE(c.size() == 1);
    CHECK(c[0].canonical == "536");
}

TEST_CASE("filing order") {
    auto less = [](const char* a, const char* b) { return notation_less(parse(a), parse(b)); };
    CHECK(less("539.12", "539.123/.124"));
    CHECK(less("539.123/.124", "539.123"));
    CHECK(less("539.123.6", "539.124"));
    CHECK(less("539.125.46", "539.125.5"));
    CHECK_FALSE(less("539.125", "539.125"));
}

TEST_CASE("facet registry rejects clashes") {
    FacetRegistry r;
    r.add({"place", "(", ")"});
    CHECK_THROWS(r.add({"place", "[", "]"}));
    CHECK_THROWS(r.add({"time", "(", ")"}));
    CHECK_THROWS(r.add({"digit", "5", ""}));
    CHECK_THROWS(r.add({"long", "((", ")"}));
}
