#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "lcf/lcf.hpp"

using namespace lcf;
using lcf::io::json;

TEST_CASE("exponent and coefficient forms") {
    CHECK(io::exponent_to_json(Exponent(Rational(-1, 2))) == json("-1/2"));
    CHECK(io::exponent_from_json(json("inf"), "").is_inf());
    CHECK(io::exponent_from_json(json("4"), "") == Exponent(Rational(4)));

    CHECK(io::coefficient_to_json(Coefficient::prime_field(5, 3)) == json{{"pf", 3}});
    CHECK(io::coefficient_to_json(Coefficient::rational(Rational(1, 3))) == json{{"rat", "1/3"}});
    CHECK(io::coefficient_to_json(Coefficient::generator(7)) == json{{"gen", 7}});
    CHECK(io::coefficient_to_json(Coefficient::padic_word(3, {1, 0, 2})) ==
          json{{"pw", {1, 0, 2}}});
}

TEST_CASE("schema errors carry pointer paths") {
    try {
        io::series_from_json(io::parse_text(R"({"mode":"equal","p":3,"trunc":"4"})", "x"), "");
        FAIL("should have thrown");
    } catch (const SchemaError& e) {
        CHECK(e.pointer() == "/terms");
    }
    try {
        io::series_from_json(
            io::parse_text(R"({"mode":"equal","p":3,"trunc":"4","terms":[{"g":"0"}]})", "x"), "");
        FAIL("should have thrown");
    } catch (const SchemaError& e) {
        CHECK(e.pointer() == "/terms/0/c");
    }
    CHECK_THROWS_AS(io::parse_text("{nope", "stdin"), SchemaError);

    // raw p-adic words are not valid inside a normalized series
    CHECK_THROWS_AS(
        io::series_from_json(
            io::parse_text(
                R"({"mode":"mixed","p":3,"trunc":"4","terms":[{"g":"0","c":{"pw":[1,1]}}]})",
                "x"),
            ""),
        SchemaError);
    // bad mode string
    CHECK_THROWS_AS(
        io::series_from_json(
            io::parse_text(R"({"mode":"both","p":3,"trunc":"4","terms":[]})", "x"), ""),
        SchemaError);
    // non-prime p in mixed mode
    CHECK_THROWS_AS(
        io::series_from_json(
            io::parse_text(R"({"mode":"mixed","p":6,"trunc":"4","terms":[]})", "x"), ""),
        SchemaError);
}

TEST_CASE("series round trips losslessly") {
    testgen::Rng rng(111);
    for (const CharMode mode : testgen::all_modes()) {
        for (int i = 0; i < 60; ++i) {
            const Series x = testgen::random_series(rng, mode, 5, i % 2 == 0);
            const json j = io::series_to_json(x);
            const Series back = io::series_from_json(j, "");
            CHECK(series_identical(back, x));
            CHECK(io::series_to_json(back) == j);
        }
    }
}

TEST_CASE("space round trips losslessly") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const UltraSpace s = testgen::corpus_space(seed, 10);
        const json j = io::space_to_json(s);
        const UltraSpace back = io::space_from_json(j);
        CHECK(back.labels() == s.labels());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t k = 0; k < s.size(); ++k) CHECK(back.g(i, k) == s.g(i, k));
        CHECK(io::space_to_json(back) == j);
    }
}

TEST_CASE("embed state round trips losslessly") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const UltraSpace s = testgen::corpus_space(seed, 8);
        const EmbedState st = embed_space(s, CharMode::mixed(3));
        const json j = io::embed_state_to_json(st);
        const EmbedState back = io::embed_state_from_json(j);
        CHECK(back.order() == st.order());
        CHECK(back.generators_used() == st.generators_used());
        for (const auto& [label, series] : st.images())
            CHECK(series_identical(back.image(label), series));
        CHECK(io::embed_state_to_json(back) == j);
        // the reloaded state still certifies
        CHECK(check_certificate(back, s).all_passed());
    }
}

TEST_CASE("urysohn point and exponent set round trips") {
    testgen::Rng rng(127);
    for (int i = 0; i < 50; ++i) {
        const auto exps = testgen::random_exponents(rng, 1 + i % 5);
        std::vector<std::pair<Rational, std::uint64_t>> support;
        for (const auto& g : exps)
            support.emplace_back(g, static_cast<std::uint64_t>(testgen::pick(rng, 1, 20)));
        const UrysohnPoint p(std::move(support));
        const UrysohnPoint back = io::urysohn_from_json(io::urysohn_to_json(p));
        CHECK(back == p);

        const ExponentSet s(exps);
        const ExponentSet sback = io::exponent_set_from_json(io::exponent_set_to_json(s));
        CHECK(sback.items() == s.items());
    }
}

TEST_CASE("padic int round trip") {
    const PadicInt a(5, 4, 132);
    const json j = io::padic_to_json(a);
    CHECK(j == json{{"p", 5}, {"N", 4}, {"v", 132}});
    const PadicInt back = io::padic_from_json(j);
    CHECK(back.p() == 5);
    CHECK(back.precision() == 4);
    CHECK(back.value() == 132);
}

TEST_CASE("emission is deterministic") {
    const UltraSpace s = testgen::corpus_space(3, 12);
    const EmbedState st = embed_space(s, CharMode::mixed(5));
    CHECK(io::embed_state_to_json(st).dump(2) == io::embed_state_to_json(st).dump(2));
    const EmbedState st2 = embed_space(s, CharMode::mixed(5));
    CHECK(io::embed_state_to_json(st).dump(2) == io::embed_state_to_json(st2).dump(2));
}
