#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "permeq/local_stats.hpp"
#include "permeq/solution_space.hpp"

using namespace permeq;

TEST_CASE("probe sets are shortlex-ordered and deduplicated") {
    Alphabet ab = Alphabet::standard(2);
    ProbeSet p = ProbeSet::words_up_to(ab, 2);
    CHECK(p.size() == 16); // 17 reduced words minus the empty one
    CHECK(p.total_letters() == 28);
    CHECK(format_word(p.word(0), ab) == "x");

    ProbeSet big = ProbeSet::words_up_to(ab, 4);
    CHECK(big.size() == 160);
    CHECK(big.total_letters() == 568);

    Word xy = parse_word("xy", ab);
    CHECK(p.index_of(xy) != ProbeSet::npos);
    CHECK(p.word(p.index_of(xy)) == xy);
    CHECK(p.index_of(parse_word("xyx", ab)) == ProbeSet::npos);

    // duplicates collapse, order is canonical regardless of input order
    ProbeSet q(ab, {xy, parse_word("x", ab), xy});
    CHECK(q.size() == 2);
    CHECK(format_word(q.word(0), ab) == "x");

    CHECK_THROWS_AS(ProbeSet(ab, {parse_word("z", Alphabet::standard(3))}),
                    PreconditionError);
}

TEST_CASE("traces record which probe words fix a point") {
    Alphabet ab = Alphabet::standard(2);
    auto probe = std::make_shared<const ProbeSet>(
        ProbeSet(ab, {parse_word("x", ab), parse_word("y", ab), parse_word("xy", ab)}));
    PermTuple t(std::vector<Perm>{parse_perm("(1 2)", 2), parse_perm("(1 2)", 2)});

    // x and y both move each point; xy is the identity
    for (std::uint32_t pt = 0; pt < 2; ++pt) {
        Trace tr = stab_trace(t, pt, *probe);
        CHECK(tr.count() == 1);
        CHECK(tr.test(probe->index_of(parse_word("xy", ab))));
    }

    // counted version answers identically and charges total_letters queries
    QueryOracle oracle(t);
    CHECK(stab_trace_counted(oracle, 0, *probe) == stab_trace(t, 0, *probe));
    CHECK(oracle.count() == probe->total_letters());

    PermTuple narrow(std::vector<Perm>{parse_perm("(1 2)", 2)});
    CHECK_THROWS_AS(stab_trace(narrow, 0, *probe), PreconditionError);
}

TEST_CASE("exact local statistics") {
    Alphabet a1 = Alphabet::standard(1);
    auto px = std::make_shared<const ProbeSet>(ProbeSet(a1, {parse_word("x", a1)}));

    // sigma = (1 2) on 3 points: the fixed point carries trace {x}
    PermTuple t(std::vector<Perm>{parse_perm("(1 2)", 3)});
    LocalStats stats = exact_local_stats(t, px);
    REQUIRE(stats.weights.size() == 2);
    Trace empty(1), full(1);
    full.set(0);
    CHECK(stats.weights.at(empty) == Rat(2, 3));
    CHECK(stats.weights.at(full) == Rat(1, 3));
    CHECK(stats.total_mass() == Rat(1));

    // support never exceeds the degree even when 2^|P| is huge
    Rng rng(23);
    for (int i = 0; i < 30; ++i) {
        std::size_t n = 2 + rng.below(7);
        PermTuple u = random_tuple(rng, 2, n);
        auto probe = std::make_shared<const ProbeSet>(
            ProbeSet::words_up_to(Alphabet::standard(2), 3)); // 2^52 conceivable traces
        LocalStats s = exact_local_stats(u, probe);
        CHECK(s.weights.size() <= n);
        CHECK(s.total_mass() == Rat(1));
    }
}

TEST_CASE("empirical statistics converge and count queries") {
    auto probe = std::make_shared<const ProbeSet>(
        ProbeSet::words_up_to(Alphabet::standard(2), 2));
    PermTuple t(std::vector<Perm>{parse_perm("(1 2 3 4)", 4), parse_perm("(1 2)", 4)});
    LocalStats exact = exact_local_stats(t, probe);

    QueryOracle oracle(t);
    Rng rng(99);
    LocalStats emp = empirical_local_stats(oracle, probe, 4000, rng);
    CHECK(emp.total_mass() == Rat(1));
    CHECK(oracle.count() == 4000 * probe->total_letters());

    // every empirical weight is a multiple of 1/s
    for (const auto& [tr, w] : emp.weights) CHECK(w * Rat(4000) == Rat(numerator(w * Rat(4000))));

    CHECK(tv_distance(emp, exact) < Rat(1, 20));
}

TEST_CASE("total variation distance") {
    auto probe = std::make_shared<const ProbeSet>(
        ProbeSet::words_up_to(Alphabet::standard(2), 2));
    Rng rng(55);

    PermTuple a = random_tuple(rng, 2, 5);
    LocalStats sa = exact_local_stats(a, probe);
    CHECK(tv_distance(sa, sa) == Rat(0));

    for (int i = 0; i < 40; ++i) {
        LocalStats x = exact_local_stats(random_tuple(rng, 2, 5), probe);
        LocalStats y = exact_local_stats(random_tuple(rng, 2, 5), probe);
        LocalStats z = exact_local_stats(random_tuple(rng, 2, 5), probe);
        Rat xy = tv_distance(x, y);
        CHECK(xy == tv_distance(y, x));
        CHECK(xy == oracle::naive_tv(x, y));
        CHECK(xy >= Rat(0));
        CHECK(xy <= Rat(1));
        CHECK(xy <= tv_distance(x, z) + tv_distance(z, y));
    }

    // distributions over different probe sets cannot be compared
    auto other = std::make_shared<const ProbeSet>(
        ProbeSet::words_up_to(Alphabet::standard(2), 1));
    LocalStats sb = exact_local_stats(a, other);
    CHECK_THROWS_AS(tv_distance(sa, sb), PreconditionError);

    // equal content through distinct pointers is fine
    auto clone = std::make_shared<const ProbeSet>(*probe);
    LocalStats sc = exact_local_stats(a, clone);
    CHECK(tv_distance(sa, sc) == Rat(0));
}

TEST_CASE("restriction marginalizes consistently") {
    Alphabet ab = Alphabet::standard(2);
    auto big = std::make_shared<const ProbeSet>(ProbeSet::words_up_to(ab, 2));
    auto small = std::make_shared<const ProbeSet>(
        ProbeSet(ab, {parse_word("x", ab), parse_word("yy", ab)}));

    Rng rng(77);
    for (int i = 0; i < 50; ++i) {
        PermTuple t = random_tuple(rng, 2, 6);
        LocalStats full = exact_local_stats(t, big);
        LocalStats direct = exact_local_stats(t, small);
        LocalStats via = restrict(full, small);
        CHECK(via.weights == direct.weights);
    }

    auto outside = std::make_shared<const ProbeSet>(
        ProbeSet(ab, {parse_word("xyx", ab)}));
    PermTuple t = random_tuple(rng, 2, 4);
    CHECK_THROWS_AS(restrict(exact_local_stats(t, big), outside), PreconditionError);
}

TEST_CASE("restriction can only shrink total variation") {
    Alphabet ab = Alphabet::standard(2);
    auto big = std::make_shared<const ProbeSet>(ProbeSet::words_up_to(ab, 2));
    auto small = std::make_shared<const ProbeSet>(
        ProbeSet(ab, {parse_word("x", ab), parse_word("xy", ab), parse_word("Y", ab)}));

    Rng rng(713);
    for (int i = 0; i < 60; ++i) {
        LocalStats x = exact_local_stats(random_tuple(rng, 2, 2 + rng.below(5)), big);
        LocalStats y = exact_local_stats(random_tuple(rng, 2, 2 + rng.below(5)), big);
        CHECK(tv_distance(restrict(x, small), restrict(y, small)) <= tv_distance(x, y));
    }
}

TEST_CASE("ball statistics agree with trace partitions") {
    Rng rng(4242);
    for (int i = 0; i < 40; ++i) {
        std::size_t k = 1 + rng.below(2);
        std::size_t n = 2 + rng.below(7);
        std::size_t r = rng.below(2);
        PermTuple t = random_tuple(rng, k, n);
        ProbeSet probe = ProbeSet::words_up_to(Alphabet::standard(k), 2 * r);
        CHECK(trace_partition(t, probe) == ball_partition(t, r));
    }

    // conjugation leaves the code multiset unchanged
    for (int i = 0; i < 20; ++i) {
        PermTuple t = random_tuple(rng, 2, 6);
        Perm pi = random_perm(rng, 6);
        CHECK(ball_stats(t, 1) == ball_stats(conjugate(t, pi), 1));
    }
}
