#include "doctest.h"

#include "msrcgr/alphabet.hpp"
#include "msrcgr/error.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using msrcgr::Error;
using msrcgr::ErrorCode;
using msrcgr::Kind;
using msrcgr::Point2;
using msrcgr::Rational;

TEST_CASE("build_alphabet sizes and order") {
    const auto dna1 = msrcgr::build_alphabet(Kind::Dna, 1);
    CHECK(dna1.size() == 4);
    CHECK(dna1.tokens() == std::vector<std::string>{"A", "T", "G", "C"});

    const auto dna2 = msrcgr::build_alphabet(Kind::Dna, 2);
    CHECK(dna2.size() == 16);
    CHECK(msrcgr::token_index(dna2, "AA") == 0);
    CHECK(msrcgr::token_index(dna2, "AT") == 1);
    CHECK(dna2.tokens() == oracle::enumerate_tokens("ATGC", 2));

    CHECK(msrcgr::build_alphabet(Kind::Protein, 1).size() == 20);
    CHECK(msrcgr::build_alphabet(Kind::Protein, 3).size() == 8000);
    CHECK(msrcgr::build_alphabet(Kind::Dna, 8).size() == 65536);
}

TEST_CASE("alphabet size cap and override") {
    try {
        msrcgr::build_alphabet(Kind::Protein, 4);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AlphabetTooLarge);
    }
    CHECK_THROWS_AS(msrcgr::build_alphabet(Kind::Dna, 9), Error);
    CHECK(msrcgr::build_alphabet(Kind::Protein, 4, {.allow_large = true}).size() == 160000);
    CHECK_THROWS_AS(msrcgr::build_alphabet(Kind::Dna, 0), Error);
}

TEST_CASE("token_index ranks and errors") {
    const auto dna1 = msrcgr::build_alphabet(Kind::Dna, 1);
    CHECK(msrcgr::token_index(dna1, "G") == 2);
    CHECK(msrcgr::token_index(dna1, "g") == 2);

    try {
        msrcgr::token_index(dna1, "N");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidToken);
        REQUIRE(e.position().has_value());
        CHECK(*e.position() == 0);
    }

    const auto dna3 = msrcgr::build_alphabet(Kind::Dna, 3);
    try {
        msrcgr::token_index(dna3, "AXA");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidToken);
        CHECK(*e.position() == 1);
        CHECK(std::string(e.what()).find("position 1") != std::string::npos);
    }
    CHECK_THROWS_AS(msrcgr::token_index(dna3, "AT"), Error);
}

TEST_CASE("token_index is a bijection with the enumeration oracle") {
    for (const auto& [kind, k] : {std::pair{Kind::Dna, 1u}, {Kind::Dna, 3u}, {Kind::Dna, 5u}, {Kind::Protein, 1u},
                                  {Kind::Protein, 2u}}) {
        const auto alphabet = msrcgr::build_alphabet(kind, k);
        const auto expected = oracle::enumerate_tokens(std::string(msrcgr::base_symbols(kind)), k);
        REQUIRE(expected.size() == alphabet.size());
        for (std::uint64_t i = 0; i < alphabet.size(); ++i) {
            REQUIRE(alphabet.token(i) == expected[i]);
            REQUIRE(alphabet.token_index(expected[i]) == i);
        }
    }
}

TEST_CASE("DNA corners are the four axis points") {
    const auto table = msrcgr::corner_points(msrcgr::build_alphabet(Kind::Dna, 1));
    CHECK(table.q() == 16);
    REQUIRE(table.size() == 4);
    CHECK(table[0] == Point2{1, 0});
    CHECK(table[1] == Point2{0, 1});
    CHECK(table[2] == Point2{-1, 0});
    CHECK(table[3] == Point2{0, -1});

    // Rotating by 90 degrees, (x, y) -> (-y, x), permutes the corner set.
    std::vector<Point2> rotated;
    for (const auto& c : table.corners()) rotated.push_back({-c.y, c.x});
    auto original = table.corners();
    std::sort(rotated.begin(), rotated.end());
    std::sort(original.begin(), original.end());
    CHECK(rotated == original);
}

TEST_CASE("protein corner 5 sits at a quarter turn") {
    const auto table = msrcgr::corner_points(msrcgr::build_alphabet(Kind::Protein, 1));
    CHECK(table.q() == 128);
    CHECK(table[5] == Point2{0, 1});
    CHECK(table[5].x == msrcgr::snap_round_q(std::cos(std::numbers::pi / 2), 128));
}

TEST_CASE("corner table invariants for small alphabets") {
    for (const auto& [kind, k] : {std::pair{Kind::Dna, 1u}, {Kind::Dna, 2u}, {Kind::Dna, 3u}, {Kind::Dna, 4u},
                                  {Kind::Protein, 1u}, {Kind::Protein, 2u}}) {
        const auto table = msrcgr::corner_points(msrcgr::build_alphabet(kind, k));
        const auto m = table.size();
        const mpz_class q(static_cast<unsigned long>(table.q()));
        auto sorted = table.corners();
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = table[i];
            REQUIRE(mpz_divisible_p(q.get_mpz_t(), c.x.den().get_mpz_t()));
            REQUIRE(mpz_divisible_p(q.get_mpz_t(), c.y.den().get_mpz_t()));
            const double angle = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
            REQUIRE(std::fabs(c.x.to_double() - std::cos(angle)) <= 1.0 / static_cast<double>(table.q()));
            REQUIRE(std::fabs(c.y.to_double() - std::sin(angle)) <= 1.0 / static_cast<double>(table.q()));
            REQUIRE(table.find(c) == static_cast<std::int64_t>(i));
        }
        CHECK(table.find(Point2{Rational(1, 2 * static_cast<long>(table.q())), 0}) == -1);
    }
}

TEST_CASE("float corners mirror the exact table") {
    const auto table = msrcgr::corner_points(msrcgr::build_alphabet(Kind::Protein, 2));
    const auto& fc = msrcgr::float_corners(Kind::Protein, 2);
    REQUIRE(fc.x.size() == table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(fc.x[i] == table[i].x.to_double());
        CHECK(fc.y[i] == table[i].y.to_double());
    }
    // Uncapped: the protein 4-mer table exists for the feature path.
    CHECK(msrcgr::float_corners(Kind::Protein, 4).x.size() == 160000);
}

TEST_CASE("shared corner tables are cached and respect the cap") {
    const auto a = msrcgr::shared_corner_table(Kind::Dna, 3);
    const auto b = msrcgr::shared_corner_table(Kind::Dna, 3);
    CHECK(a.get() == b.get());
    CHECK_THROWS_AS(msrcgr::shared_corner_table(Kind::Protein, 4), Error);
}

TEST_CASE("symbol_index upper-cases input") {
    CHECK(msrcgr::symbol_index(Kind::Dna, 'c') == 3);
    CHECK(msrcgr::symbol_index(Kind::Protein, 'y') == 19);
    CHECK(msrcgr::symbol_index(Kind::Protein, 'B') == -1);
    CHECK(msrcgr::symbol_index(Kind::Dna, 'N') == -1);
}
