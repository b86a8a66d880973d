#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "permeq/gset.hpp"
#include "permeq/solution_space.hpp"

using namespace permeq;

namespace {

GSet gs(std::vector<Perm> ps) { return make_gset(PermTuple(std::move(ps))); }

} // namespace

TEST_CASE("distance between actions: frozen values") {
    // swap vs trivial on two points: every (generator, point) pair disagrees
    GSet swap2 = gs({parse_perm("(1 2)", 2)});
    GSet triv2 = gs({Perm::identity(2)});
    GsetDistance d = gset_distance(swap2, triv2);
    CHECK(d.value == Rat(1));
    CHECK(d.exact);

    CHECK(gset_distance(swap2, swap2).value == Rat(0));

    // a 3-cycle embeds into a 4-cycle only imperfectly
    GSet c3 = gs({parse_perm("(1 2 3)", 3)});
    GSet c4 = gs({parse_perm("(1 2 3 4)", 4)});
    GsetDistance cross = gset_distance(c3, c4);
    CHECK(cross.exact);
    CHECK(cross.value > Rat(0));
    CHECK(cross.value == gset_distance(c4, c3).value); // symmetrized by construction
}

TEST_CASE("distance matches the brute-force bijection oracle") {
    Rng rng(606);
    for (int i = 0; i < 60; ++i) {
        std::size_t k = 1 + rng.below(2);
        std::size_t n = 2 + rng.below(4); // up to 5: 120 bijections for the oracle
        PermTuple a = random_tuple(rng, k, n);
        PermTuple b = random_tuple(rng, k, n);
        Rat expect = oracle::brute_bijection_distance(a, b);
        GsetDistance got = gset_distance(make_gset(a), make_gset(b));
        CHECK(got.exact);
        CHECK(got.value == expect);
    }
}

TEST_CASE("relabeled actions are at distance zero") {
    Rng rng(607);
    for (int i = 0; i < 40; ++i) {
        std::size_t n = 2 + rng.below(5);
        PermTuple a = random_tuple(rng, 2, n);
        Perm pi = random_perm(rng, n);
        GsetDistance d = gset_distance(make_gset(a), make_gset(conjugate(a, pi)));
        CHECK(d.value == Rat(0));
        CHECK(d.exact);
    }
}

TEST_CASE("budget refusal and the greedy escape hatch") {
    Rng rng(608);
    PermTuple a = random_tuple(rng, 2, 6);
    PermTuple b = random_tuple(rng, 2, 6);

    GsetDistanceOptions tight;
    tight.max_exact_points = 4;
    try {
        gset_distance(make_gset(a), make_gset(b), tight);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("ceiling") != std::string::npos);
    }

    tight.allow_greedy = true;
    GsetDistance greedy = gset_distance(make_gset(a), make_gset(b), tight);
    CHECK_FALSE(greedy.exact);
    CHECK(greedy.value >= gset_distance(make_gset(a), make_gset(b)).value);

    CHECK_THROWS_AS(
        gset_distance(gs({Perm::identity(2)}), gs({Perm::identity(2), Perm::identity(2)})),
        PreconditionError);
}

TEST_CASE("certified actions must satisfy the relators") {
    EquationSystem comm = commutator();
    PermTuple sol(std::vector<Perm>{parse_perm("(1 2)", 4), parse_perm("(3 4)", 4)});
    PermTuple bad(std::vector<Perm>{parse_perm("(1 2)", 4), parse_perm("(2 3)", 4)});

    GSet cert = certified_gset(sol, comm);
    CHECK(cert.certified);
    CHECK_FALSE(make_gset(sol).certified);
    CHECK_THROWS_AS(certified_gset(bad, comm), PreconditionError);
}

TEST_CASE("random-stabilizer marginals") {
    Alphabet ab = Alphabet::standard(1);
    Word x = parse_word("x", ab);
    Word xx = parse_word("xx", ab);

    // two-point swap: x never fixes, xx always does
    GSet swap2 = gs({parse_perm("(1 2)", 2)});
    CHECK(random_stabilizer_marginal(swap2, MarginalSpec{{x, xx}, {xx}}) == Rat(1));
    CHECK(random_stabilizer_marginal(swap2, MarginalSpec{{x, xx}, {x, xx}}) == Rat(0));
    CHECK(random_stabilizer_marginal(swap2, MarginalSpec{{x, xx}, {}}) == Rat(0));

    // sigma = (1 2) on 3 points: the fixed point realizes B = {x, xx}
    GSet mixed = gs({parse_perm("(1 2)", 3)});
    CHECK(random_stabilizer_marginal(mixed, MarginalSpec{{x, xx}, {x, xx}}) == Rat(1, 3));
    CHECK(random_stabilizer_marginal(mixed, MarginalSpec{{x, xx}, {xx}}) == Rat(2, 3));

    CHECK_THROWS_AS(
        random_stabilizer_marginal(swap2, MarginalSpec{{x}, {xx}}), // B not inside A
        PreconditionError);

    // the marginals over all subsets of A form a probability distribution
    Alphabet ab2 = Alphabet::standard(2);
    Rng rng(909);
    for (int i = 0; i < 10; ++i) {
        PermTuple t = random_tuple(rng, 2, 5);
        std::vector<Word> A{parse_word("x", ab2), parse_word("y", ab2), parse_word("xy", ab2)};
        Rat total(0);
        for (unsigned mask = 0; mask < 8; ++mask) {
            std::vector<Word> B;
            for (unsigned bit = 0; bit < 3; ++bit)
                if (mask & (1u << bit)) B.push_back(A[bit]);
            total += random_stabilizer_marginal(make_gset(t), MarginalSpec{A, B});
        }
        CHECK(total == Rat(1));
    }
}
