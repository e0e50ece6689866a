#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "rlncoff/gf.hpp"

using rlncoff::gf::Field;
using rlncoff::gf::Matrix;

TEST_CASE("field construction accepts only the supported orders") {
    CHECK_NOTHROW(Field(2));
    CHECK_NOTHROW(Field(256));
    CHECK_THROWS_AS(Field(0), std::domain_error);
    CHECK_THROWS_AS(Field(3), std::domain_error);
    CHECK_THROWS_AS(Field(16), std::domain_error);
}

TEST_CASE("reduction polynomial must be of degree 8 and irreducible") {
    CHECK_THROWS_AS(Field(256, 0x1B), std::domain_error);    // degree < 8
    CHECK_THROWS_AS(Field(256, 0x31B), std::domain_error);   // degree > 8
    // x^8 + x^4 + x^3 + x^2 + 1 is irreducible as well.
    CHECK_NOTHROW(Field(256, 0x11D));
    // x^8 + ... + x + 1 = (x^2+x+1)(x^6+x^3+1) is reducible.
    CHECK_THROWS_AS(Field(256, 0x1FF), std::domain_error);
    // x^8 alone is trivially reducible.
    CHECK_THROWS_AS(Field(256, 0x100), std::domain_error);
}

TEST_CASE("binary field arithmetic is xor / and") {
    const Field f(2);
    for (std::uint8_t a : {0, 1})
        for (std::uint8_t b : {0, 1}) {
            CHECK(f.add(a, b) == (a ^ b));
            CHECK(f.mul(a, b) == (a & b));
        }
    CHECK(f.inv(1) == 1);
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
    CHECK_THROWS_AS(f.add(2, 0), std::domain_error);
    CHECK_THROWS_AS(f.mul(0, 7), std::domain_error);
    CHECK(f.contains(1));
    CHECK_FALSE(f.contains(2));
}

TEST_CASE("byte field matches hand-computed products") {
    const Field f(256);
    CHECK(f.add(0x57, 0x83) == 0xD4);
    CHECK(f.mul(0x02, 0x87) == 0x15);
    CHECK(f.mul(0x53, 0xCA) == 0x01);
    CHECK(f.inv(0x53) == 0xCA);
    CHECK(f.mul(0x00, 0xFF) == 0x00);
    CHECK(f.mul(0x01, 0xFF) == 0xFF);
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
}

TEST_CASE("byte field multiplication agrees with the shift-and-add oracle") {
    const Field f(256);
    oracles::SplitMix gen(0x6a09e667f3bcc908ull);
    for (int i = 0; i < 4000; ++i) {
        const auto a = std::uint8_t(gen.below(256));
        const auto b = std::uint8_t(gen.below(256));
        CAPTURE(int(a), int(b));
        REQUIRE(f.mul(a, b) == oracles::gf256_mul(a, b));
    }
}

TEST_CASE("every nonzero byte has a working inverse") {
    const Field f(256);
    for (unsigned a = 1; a < 256; ++a) {
        CAPTURE(a);
        REQUIRE(f.mul(std::uint8_t(a), f.inv(std::uint8_t(a))) == 1);
        REQUIRE(f.inv(std::uint8_t(a)) == oracles::gf256_inv(std::uint8_t(a)));
    }
}

TEST_CASE("alternate polynomial gives a consistent field") {
    const Field f(256, 0x11D);
    for (unsigned a = 1; a < 256; ++a)
        REQUIRE(f.mul(std::uint8_t(a), f.inv(std::uint8_t(a))) == 1);
    oracles::SplitMix gen(17);
    for (int i = 0; i < 1000; ++i) {
        const auto a = std::uint8_t(gen.below(256));
        const auto b = std::uint8_t(gen.below(256));
        REQUIRE(f.mul(a, b) == oracles::gf256_mul(a, b, 0x11D));
    }
}

TEST_CASE("rank of simple matrices") {
    const Field f2(2);
    const Field f256(256);

    SECTION("identity has full rank") {
        for (const Field* f : {&f2, &f256}) {
            Matrix m(5, 5);
            for (std::size_t i = 0; i < 5; ++i) m.at(i, i) = 1;
            CHECK(rank(*f, m) == 5);
        }
    }
    SECTION("zero matrix has rank zero") {
        Matrix m(4, 6);
        CHECK(rank(f2, m) == 0);
        CHECK(rank(f256, m) == 0);
    }
    SECTION("a scaled copy of a row is dependent") {
        Matrix m(2, 3);
        m.at(0, 0) = 0x11; m.at(0, 1) = 0x22; m.at(0, 2) = 0x33;
        for (std::size_t c = 0; c < 3; ++c) m.at(1, c) = oracles::gf256_mul(0x7E, m.at(0, c));
        CHECK(rank(f256, m) == 1);
    }
    SECTION("empty matrix") {
        CHECK(rank(f2, Matrix(0, 0)) == 0);
        CHECK(rank(f256, Matrix(3, 0)) == 0);
    }
    SECTION("xor-dependent binary rows") {
        Matrix m(3, 4);
        m.at(0, 0) = 1; m.at(0, 2) = 1;
        m.at(1, 1) = 1; m.at(1, 2) = 1;
        for (std::size_t c = 0; c < 4; ++c) m.at(2, c) = m.at(0, c) ^ m.at(1, c);
        CHECK(rank(f2, m) == 2);
    }
}

TEST_CASE("rank agrees with textbook elimination on random matrices") {
    oracles::SplitMix gen(0xfeedface);
    for (const unsigned q : {2u, 256u}) {
        const Field f(q);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t rows = 1 + gen.below(12);
            const std::size_t cols = 1 + gen.below(9);
            Matrix m(rows, cols);
            std::vector<std::vector<std::uint8_t>> copy(rows,
                                                        std::vector<std::uint8_t>(cols));
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c) {
                    const auto v = std::uint8_t(gen.below(q));
                    m.at(r, c) = v;
                    copy[r][c] = v;
                }
            CAPTURE(q, rows, cols, trial);
            REQUIRE(rank(f, m) == oracles::rank(copy, q));
        }
    }
}

TEST_CASE("rank over wide binary matrices crosses word boundaries") {
    const Field f(2);
    oracles::SplitMix gen(99);
    const std::size_t cols = 150;  // three 64-bit words
    Matrix m(8, cols);
    std::vector<std::vector<std::uint8_t>> copy(8, std::vector<std::uint8_t>(cols));
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const auto v = std::uint8_t(gen.below(2));
            m.at(r, c) = v;
            copy[r][c] = v;
        }
    REQUIRE(rank(f, m) == oracles::rank(copy, 2));
}

TEST_CASE("rank validates shape and entries") {
    const Field f2(2);
    Matrix bad(2, 2);
    bad.entries.resize(3);
    CHECK_THROWS_AS(rank(f2, bad), std::domain_error);
    Matrix wrong(1, 2);
    wrong.at(0, 1) = 2;
    CHECK_THROWS_AS(rank(f2, wrong), std::domain_error);
}
