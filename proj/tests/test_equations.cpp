#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "permeq/equations.hpp"

using namespace permeq;

TEST_CASE("built-in systems") {
    EquationSystem comm = commutator();
    CHECK(comm.rank() == 2);
    REQUIRE(comm.relators().size() == 1);
    CHECK(format_word(comm.relators()[0], comm.alphabet()) == "xyXY");
    CHECK(comm.max_relator_length() == 4);

    EquationSystem bs12 = baumslag_solitar(1, 2);
    CHECK(format_word(bs12.relators()[0], bs12.alphabet()) == "xyXYY");
    CHECK(bs12.max_relator_length() == 5);

    EquationSystem bs23 = baumslag_solitar(2, 3);
    CHECK(format_word(bs23.relators()[0], bs23.alphabet()) == "xyyXYYY");
}

TEST_CASE("system invariants") {
    Alphabet ab = Alphabet::standard(2);
    Word r = parse_word("xyXY", ab);

    CHECK_THROWS_AS(EquationSystem(ab, {}), ParseError);
    CHECK_THROWS_AS(EquationSystem(ab, {Word()}), ParseError); // empty relator
    CHECK_THROWS_AS(EquationSystem(ab, {r, r}), ParseError);   // duplicate
    CHECK_THROWS_AS(
        EquationSystem(ab, {parse_word("xz", Alphabet::standard(3))}),
        ParseError); // letter outside the alphabet
}

TEST_CASE("named and textual systems") {
    auto named = resolve_named_system("commutator");
    REQUIRE(named.has_value());
    CHECK(named->relators() == commutator().relators());

    auto bs = resolve_named_system("bs 1 2");
    REQUIRE(bs.has_value());
    CHECK(bs->relators() == baumslag_solitar(1, 2).relators());

    CHECK_FALSE(resolve_named_system("frobnicator").has_value());
    CHECK_FALSE(resolve_named_system("bs").has_value());

    EquationSystem parsed = parse_system_text("x y\n# both relators force commuting\nxyXY\n");
    CHECK(parsed.rank() == 2);
    CHECK(parsed.relators() == commutator().relators());
}

TEST_CASE("solutions of the commutator system commute") {
    EquationSystem comm = commutator();
    PermTuple commuting(std::vector<Perm>{parse_perm("(1 2)", 4), parse_perm("(3 4)", 4)});
    PermTuple clashing(std::vector<Perm>{parse_perm("(1 2)", 4), parse_perm("(2 3)", 4)});

    CHECK(is_solution(comm, commuting));
    CHECK_FALSE(is_solution(comm, clashing));

    // agreement with the naive oracle across all of Sym(3)^2
    for (const Perm& a : oracle::all_perms(3))
        for (const Perm& b : oracle::all_perms(3)) {
            PermTuple t(std::vector<Perm>{a, b});
            bool expect = compose(a, b) == compose(b, a);
            CHECK(is_solution(comm, t) == expect);
        }

    CHECK_THROWS_AS(
        is_solution(comm, PermTuple(std::vector<Perm>{Perm::identity(3)})),
        PreconditionError);
}

TEST_CASE("defect is the mean relator displacement") {
    EquationSystem comm = commutator();
    PermTuple t(std::vector<Perm>{parse_perm("(1 2 3 4)", 4), parse_perm("(1 2)", 4)});
    CHECK(defect(comm, t) == Rat(3, 4)); // the commutator moves 3 of 4 points

    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        PermTuple u = random_tuple(rng, 2, 5);
        Rat d = defect(comm, u);
        CHECK(d == oracle::naive_defect(comm, u));
        CHECK((d == Rat(0)) == is_solution(comm, u));
        CHECK(d >= Rat(0));
        CHECK(d <= Rat(1));
    }

    // multi-relator system averages over relators
    Alphabet ab = Alphabet::standard(2);
    EquationSystem two(ab, {parse_word("xyXY", ab), parse_word("xx", ab)});
    PermTuple u(std::vector<Perm>{parse_perm("(1 2)", 2), parse_perm("(1 2)", 2)});
    // commutator is trivial at u; xx is trivial too ((1 2)^2 = id)
    CHECK(defect(two, u) == Rat(0));
    PermTuple v(std::vector<Perm>{parse_perm("(1 2 3)", 3), Perm::identity(3)});
    // commutator trivial, xx = (1 3 2) moves all 3: mean of 0 and 1
    CHECK(defect(two, v) == Rat(1, 2));
}
