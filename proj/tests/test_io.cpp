#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "permeq/io.hpp"

using namespace permeq;

TEST_CASE("rational parsing and fixed-point formatting") {
    CHECK(parse_rational("1/3") == Rat(1, 3));
    CHECK(parse_rational("0.25") == Rat(1, 4));
    CHECK(parse_rational("-2/5") == Rat(-2, 5));
    CHECK(parse_rational("7") == Rat(7));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);

    CHECK(rat_to_string(Rat(1, 3)) == "1/3");
    CHECK(rat_to_string(Rat(3)) == "3/1");
    CHECK(rat_to_string(Rat(-1, 2)) == "-1/2");

    CHECK(format_fixed(Rat(1, 3), 6) == "0.333333");
    CHECK(format_fixed(Rat(2, 3), 6) == "0.666667"); // rounds, not truncates
    CHECK(format_fixed(Rat(1), 6) == "1.000000");
    CHECK(format_fixed(Rat(-5, 4), 2) == "-1.25");
    CHECK(format_fixed(Rat(1, 2), 0) == "1"); // half rounds away from zero
    CHECK(format_fixed(Rat(-1, 2), 0) == "-1");
}

TEST_CASE("permutations and tuples through JSON") {
    Perm p = parse_perm("(1 2 3)", 4);
    Json pj = perm_to_json(p);
    CHECK(pj.dump() == "[2,3,1,4]"); // 1-based images
    CHECK(perm_from_json(pj) == p);

    PermTuple t(std::vector<Perm>{p, parse_perm("(1 2)", 4)});
    Json tj = tuple_to_json(t);
    CHECK(tj["n"] == 4);
    CHECK(tj["k"] == 2);
    CHECK(tuple_from_json(tj) == t);

    // a bare array of image arrays is accepted too
    CHECK(tuple_from_json(Json::parse("[[2,1],[1,2]]")).arity() == 2);

    CHECK_THROWS_AS(perm_from_json(Json::parse("[0,1]")), ParseError);   // 0 is not 1-based
    CHECK_THROWS_AS(perm_from_json(Json::parse("[1,1]")), ParseError);   // not a bijection
    CHECK_THROWS_AS(tuple_from_json(Json::parse("{\"x\":1}")), ParseError);
}

TEST_CASE("format sniffing") {
    PermTuple from_text = parse_tuple_any("n=3\n(1 2)\n(1 3)\n");
    PermTuple from_json = parse_tuple_any("  {\"perms\": [[2,1,3],[3,2,1]]}");
    CHECK(from_text == from_json);
    CHECK(parse_tuple_any("[[2,1,3],[3,2,1]]") == from_json);
    CHECK_THROWS_AS(parse_tuple_any("{broken"), ParseError);
}

TEST_CASE("systems through JSON and files") {
    EquationSystem comm = commutator();
    Json j = system_to_json(comm);
    CHECK(j["alphabet"] == "xy");
    CHECK(j["relators"].dump() == "[\"xyXY\"]");
    CHECK(system_from_json(j).relators() == comm.relators());

    CHECK(load_system("commutator").relators() == comm.relators());
    CHECK(load_system("bs 1 2").relators() == baumslag_solitar(1, 2).relators());

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "permeq_io_test";
    fs::create_directories(dir);

    const std::string jpath = (dir / "sys.json").string();
    write_file(jpath, j.dump());
    CHECK(load_system(jpath).relators() == comm.relators());

    const std::string tpath = (dir / "sys.txt").string();
    write_file(tpath, "x y\nxyXY\n");
    CHECK(load_system(tpath).relators() == comm.relators());

    CHECK_THROWS_AS(load_system((dir / "missing.txt").string()), ParseError);
    fs::remove_all(dir);
}

TEST_CASE("statistics serialization") {
    Alphabet a1 = Alphabet::standard(1);
    auto probe = std::make_shared<const ProbeSet>(
        ProbeSet(a1, {parse_word("x", a1), parse_word("xx", a1)}));
    PermTuple t(std::vector<Perm>{parse_perm("(1 2)", 3)});
    LocalStats s = exact_local_stats(t, probe);

    Json j = stats_to_json(s);
    CHECK(j["probe"].dump() == "[\"x\",\"xx\"]");
    // moved points fix only xx; the fixed point fixes both
    CHECK(j["atoms"]["xx"] == "2/3");
    CHECK(j["atoms"]["x,xx"] == "1/3");

    std::string csv = stats_to_csv(s);
    CHECK(csv.find("trace,weight,weight_float\n") == 0);
    CHECK(csv.find("x xx,1/3,0.333333") != std::string::npos); // comma-free trace keys
    CHECK(csv.find("xx,2/3,0.666667") != std::string::npos);
}

TEST_CASE("verdict serialization") {
    EquationSystem comm = commutator();
    PermTuple bad(std::vector<Perm>{parse_perm("(1 2 3)", 3), parse_perm("(1 2)", 3)});
    SasConfig cfg{comm, 2, true};
    QueryOracle oracle(bad);
    TesterVerdict v = sas_run(cfg, oracle, 7);

    Json j = verdict_to_json(v, true);
    CHECK(j["accepted"] == false);
    CHECK(j["queries_used"] == 8);
    CHECK(j["query_budget"] == 8);
    REQUIRE(j["transcript"].size() == 8);
    CHECK(j["transcript"][0]["dir"].is_string());
    CHECK(j["transcript"][0]["point"] >= 1); // external form is 1-based

    auto probe = std::make_shared<const ProbeSet>(
        ProbeSet::words_up_to(Alphabet::standard(2), 2));
    LsmConfig lcfg{comm, 100, probe, Rat(1, 20), ExhaustiveSource{}, false};
    QueryOracle o2(bad);
    LsmVerdict lv = lsm_run(lcfg, o2, 7);
    Json lj = verdict_to_json(lv);
    CHECK(lj.contains("min_tv"));
    CHECK(lj.contains("min_tv_float"));
    CHECK(lj["approximate_comparison"] == false);
}
