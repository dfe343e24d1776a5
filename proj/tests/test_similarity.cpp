#include <random>

#include "doctest.h"

#include "ifslab/error.hpp"
#include "ifslab/similarity.hpp"

using namespace ifslab;

namespace {

Rational q(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

Ifs cantor(const Rational& r) { return Ifs({{r, 0}, {r, 1 - r}}); }

Similarity random_similarity(std::mt19937_64& rng) {
    auto num = static_cast<long>(rng() % 19) - 9;
    if (num == 0) num = 1;
    return {q(num, 10 + static_cast<long>(rng() % 7)), q(static_cast<long>(rng() % 41) - 20, 7)};
}

}  // namespace

TEST_CASE("parse rationals and resolutions") {
    CHECK(parse_rational("1/3") == Rational(1, 3));
    CHECK(parse_rational("-2/4") == Rational(-1, 2));
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("-1.5") == Rational(-3, 2));
    CHECK(parse_resolution("2^-16") == Rational(1, 65536));
    CHECK(parse_resolution("1/1024") == pow2(-10));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("similarity composition") {
    Similarity f{Rational(1, 3), 0};
    Similarity g{Rational(1, 3), Rational(2, 3)};
    Similarity fg = compose(f, g);
    CHECK(fg.ratio == Rational(1, 9));
    CHECK(fg.translation == Rational(2, 9));
    CHECK(compose(f, Similarity::identity()) == f);
    CHECK(compose(invert(g), g) == Similarity::identity());
    CHECK(apply(Similarity{-1, 1}, Interval{0, Rational(1, 4)}) == Interval{Rational(3, 4), 1});
}

TEST_CASE("composition is associative and inverts exactly") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
        auto a = random_similarity(rng);
        auto b = random_similarity(rng);
        auto c = random_similarity(rng);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, invert(a)) == Similarity::identity());
        Rational x = q(static_cast<long>(rng() % 100), 37);
        CHECK(compose(a, b)(x) == a(b(x)));
    }
}

TEST_CASE("IFS validation") {
    CHECK_THROWS_AS(Ifs({{Rational(1, 2), 0}}), Error);
    CHECK_THROWS_AS(Ifs({{1, 0}, {Rational(1, 2), 0}}), Error);
    CHECK_THROWS_AS(Ifs({{0, 0}, {Rational(1, 2), 0}}), Error);
    CHECK_THROWS_AS(Ifs({{-1, 0}, {Rational(1, 2), 0}}), Error);
    CHECK(cantor(Rational(1, 3)).homogeneous());
    CHECK_FALSE(Ifs({{Rational(1, 2), 0}, {Rational(1, 3), Rational(2, 3)}}).homogeneous());
}

TEST_CASE("cylinder maps") {
    Ifs c = cantor(Rational(1, 3));
    Similarity m = cylinder_map(c, {0, 1, 1});
    CHECK(m.ratio == Rational(1, 27));
    CHECK(m.translation == Rational(8, 27));
    CHECK(cylinder_map(c, {}) == Similarity::identity());
    CHECK_THROWS_AS(cylinder_map(c, {0, 2}), Error);
    CHECK(word_to_string({0, 1, 1}) == "(1,2,2)");
}

TEST_CASE("cylinder map of a concatenation is the composition") {
    Ifs ifs({{Rational(1, 2), 0}, {Rational(1, 3), Rational(2, 3)}, {Rational(1, 5), Rational(1, 4)}});
    std::mt19937_64 rng(11);
    for (int k = 0; k < 100; ++k) {
        Word u(rng() % 5), v(rng() % 5);
        for (auto& x : u) x = rng() % 3;
        for (auto& x : v) x = rng() % 3;
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        CHECK(cylinder_map(ifs, uv) == compose(cylinder_map(ifs, u), cylinder_map(ifs, v)));
    }
}

TEST_CASE("attractor hull") {
    CHECK(attractor_hull(cantor(Rational(1, 3))) == Interval{0, 1});
    Ifs shifted({{Rational(1, 2), 1}, {Rational(1, 2), 2}});
    CHECK(attractor_hull(shifted) == Interval{2, 4});
    Ifs mixed({{Rational(1, 2), 0}, {Rational(1, 3), Rational(2, 3)}});
    CHECK(attractor_hull(mixed) == Interval{0, 1});
}

TEST_CASE("hull endpoints are fixed points of the extreme maps") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        std::size_t m = 2 + rng() % 4;
        std::vector<Similarity> maps;
        Rational left = 0;
        for (std::size_t i = 0; i < m; ++i) {
            Rational r = q(1, static_cast<long>(m + 1 + rng() % 4));
            maps.push_back({r, left});
            left += r + q(static_cast<long>(rng() % 3), 50);
        }
        Rational total = left;
        for (auto& s : maps) {
            s.ratio /= total;
            s.translation /= total;
        }
        Ifs ifs(maps);
        Interval hull = attractor_hull(ifs);
        CHECK(maps.front()(hull.lo) == hull.lo);
        CHECK(maps.back()(hull.hi) == hull.hi);
        for (const auto& s : maps) CHECK(hull.contains(apply(s, hull)));
    }
}

TEST_CASE("cylinder covers") {
    Ifs c = cantor(Rational(1, 3));
    auto cover = cylinder_cover(c, Rational(1, 3));
    REQUIRE(cover.size() == 2);
    CHECK(cover[0].hull == Interval{0, Rational(1, 3)});
    CHECK(cover[1].hull == Interval{Rational(2, 3), 1});
    CHECK(cylinder_cover(c, pow2(-10)).size() == 128);
    CHECK(cylinder_cover(c, 2).size() == 1);
    CHECK_THROWS_AS(cylinder_cover(c, 0), Error);
    CHECK_THROWS_AS(cylinder_cover(c, -1), Error);
    CHECK(cylinders_at_depth(c, 3).size() == 8);
    CHECK(cylinders_at_depth(c, 2, {1}).front().word == Word{1, 0, 0});
}

TEST_CASE("finer covers refine coarser ones") {
    Ifs ifs({{Rational(1, 2), 0}, {Rational(1, 3), Rational(2, 3)}});
    auto coarse = cylinder_cover(ifs, pow2(-4));
    auto fine = cylinder_cover(ifs, pow2(-9));
    for (const auto& piece : fine) {
        CHECK(piece.hull.diameter() <= pow2(-9));
        bool inside = false;
        for (const auto& big : coarse) {
            if (big.hull.contains(piece.hull)) {
                inside = true;
                break;
            }
        }
        CHECK(inside);
    }
    for (std::size_t k = 1; k < fine.size(); ++k) CHECK(fine[k - 1].word < fine[k].word);
}
