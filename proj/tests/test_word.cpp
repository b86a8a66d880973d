#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "permeq/word.hpp"

using namespace permeq;

TEST_CASE("parsing and free reduction") {
    Alphabet ab = Alphabet::standard(2);

    CHECK(format_word(parse_word("1", ab), ab) == "1");
    CHECK(parse_word("1", ab).empty());
    CHECK(format_word(parse_word("xyXY", ab), ab) == "xyXY");
    CHECK(parse_word("xX", ab).empty());
    CHECK(format_word(parse_word("xyYz", Alphabet::standard(3)), Alphabet::standard(3)) == "xz");
    CHECK(format_word(parse_word("xyYXxy", ab), ab) == "xy"); // cascade: xyYXxy -> xXxy -> xy

    CHECK_THROWS_AS(parse_word("xqz", Alphabet::standard(3)), ParseError);
    CHECK_THROWS_AS(parse_word("x1", ab), ParseError); // '1' only stands alone
    CHECK_THROWS_AS(parse_word("", ab), ParseError);
    CHECK_THROWS_AS(parse_word("z", ab), ParseError); // outside rank-2 alphabet

    // reported position is 1-based
    try {
        parse_word("xy?", ab);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 3);
    }
}

TEST_CASE("word algebra laws") {
    Alphabet ab = Alphabet::standard(2);
    Rng rng(411);

    for (int i = 0; i < 200; ++i) {
        Word u = oracle::random_reduced_word(rng, 2, 8);
        Word v = oracle::random_reduced_word(rng, 2, 8);

        // round trip through text
        CHECK(parse_word(format_word(u, ab), ab) == u);

        // w * w^-1 cancels completely
        CHECK(concat(u, u.inverted()).empty());

        // (uv)^-1 = v^-1 u^-1
        CHECK(concat(u, v).inverted() == concat(v.inverted(), u.inverted()));
    }

    Word x = parse_word("x", ab);
    Word xy = parse_word("xy", ab);
    CHECK(format_word(word_pow(x, 3), ab) == "xxx");
    CHECK(format_word(word_pow(xy, -2), ab) == "YXYX");
    CHECK(word_pow(xy, 0).empty());
}

TEST_CASE("shortlex enumeration") {
    // closed form: 1 + sum over lengths of 2k(2k-1)^(l-1)
    CHECK(count_reduced_words(2, 2) == 17);
    CHECK(count_reduced_words(3, 4) == 937);
    CHECK(count_reduced_words(1, 3) == 7); // 1, x, X, xx, XX, xxx, XXX

    Alphabet ab = Alphabet::standard(2);
    auto words = enumerate_reduced_words(2, 2);
    REQUIRE(words.size() == 17);

    std::vector<std::string> head;
    for (std::size_t i = 0; i < 8; ++i) head.push_back(format_word(words[i], ab));
    CHECK(head == std::vector<std::string>{"1", "x", "X", "y", "Y", "xx", "xy", "xY"});

    for (std::size_t i = 0; i + 1 < words.size(); ++i)
        CHECK(shortlex_less(words[i], words[i + 1]));

    // every enumerated word is reduced (re-reducing is the identity) and the
    // count formula agrees at another size
    for (const Word& w : enumerate_reduced_words(3, 3))
        CHECK(Word::from_letters(w.letters()) == w);
    CHECK(enumerate_reduced_words(3, 3).size() == count_reduced_words(3, 3));
}

TEST_CASE("evaluation is a left action") {
    // sigma_1 = (1 2 3), sigma_2 = (1 2): frozen values worked out by hand
    PermTuple t(std::vector<Perm>{parse_perm("(1 2 3)", 3), parse_perm("(1 2)", 3)});
    Alphabet ab = Alphabet::standard(2);

    CHECK(format_cycles(evaluate(parse_word("xyX", ab), t)) == "(2 3)");
    CHECK(format_cycles(evaluate(parse_word("xyXY", ab), t)) == "(1 3 2)");
    CHECK(evaluate(parse_word("1", ab), t).is_identity());

    // rightmost letter acts first: (xy)(x) applies y, then x
    Word xy = parse_word("xy", ab);
    for (std::uint32_t p = 0; p < 3; ++p)
        CHECK(evaluate_point(xy, t, p) == t.fwd(0, t.fwd(1, p)));
}

TEST_CASE("evaluation matches the naive oracle") {
    Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const std::size_t k = 1 + rng.below(3);
        const std::size_t n = 2 + rng.below(6);
        PermTuple t = random_tuple(rng, k, n);
        Word u = oracle::random_reduced_word(rng, k, 10);
        Word v = oracle::random_reduced_word(rng, k, 10);

        CHECK(evaluate(u, t) == oracle::naive_evaluate(u, t));

        // homomorphism in the word argument
        CHECK(evaluate(concat(u, v), t) == compose(evaluate(u, t), evaluate(v, t)));
        CHECK(evaluate(u.inverted(), t) == evaluate(u, t).inverse());
    }
}

TEST_CASE("counted evaluation charges one query per letter") {
    PermTuple t(std::vector<Perm>{parse_perm("(1 2 3 4)", 4), parse_perm("(1 2)", 4)});
    QueryOracle oracle(t);
    Word w = parse_word("xyXY", Alphabet::standard(2));

    std::uint32_t direct = evaluate_point(w, t, 0);
    CHECK(evaluate_point_counted(w, oracle, 0) == direct);
    CHECK(oracle.count() == 4);
    evaluate_point_counted(w, oracle, 1);
    CHECK(oracle.count() == 8);
    oracle.reset();
    CHECK(oracle.count() == 0);
}
