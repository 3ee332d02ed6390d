#include <doctest.h>

#include <random>

#include "dms/harness.hpp"
#include "dms/parser.hpp"
#include "support.hpp"

using namespace dms;

TEST_CASE("parse the two-rule odd loop") {
    const auto p = parse_program(test::kOddLoop);
    REQUIRE(p.size() == 2);
    CHECK(p.rules()[0] == Rule({Atom("a"), Atom("b")}));
    CHECK(p.rules()[1] == Rule({Atom("a")}, {}, {Atom("a"), Atom("b")}));
}

TEST_CASE("parse single fact and rule") {
    const auto p = parse_program("p(1).");
    REQUIRE(p.size() == 1);
    CHECK(p.rules()[0].is_fact());

    const auto r = parse_program("father(X,Y) :- related(X,Y), not brother(X,Y).").rules().at(0);
    const auto X = Term::variable("X"), Y = Term::variable("Y");
    CHECK(r == Rule({Atom("father", {X, Y})}, {Atom("related", {X, Y})}, {Atom("brother", {X, Y})}));
}

TEST_CASE("disjunction separators and comments") {
    const auto with_v = parse_program("a v b :- c. % trailing\nc.");
    const auto with_bar = parse_program("% leading\na | b :- c.\nc.");
    CHECK(with_v == with_bar);
    CHECK(parse_program("").empty());
    CHECK(parse_program("  % only a comment").empty());
}

TEST_CASE("queries") {
    const auto q = parse_query("ancestor(p1,p2)?");
    CHECK(q.atom == Atom("ancestor", {Term::constant("p1"), Term::constant("p2")}));
    CHECK(q.is_ground());
    CHECK(parse_query("q(a)?").atom.arity() == 1);
    CHECK_FALSE(parse_query(" p(X) ? ").is_ground());
    CHECK_THROWS_AS(parse_query("p(a), q(b)?"), SourceError);
    CHECK_THROWS_AS(parse_query("p(a)"), SourceError);
    CHECK_THROWS_AS(parse_query("p(a)? q"), SourceError);
    CHECK_THROWS_AS(parse_query("not p(a)?"), SourceError);
}

TEST_CASE("errors carry positions") {
    try {
        parse_program("a.\nb :- c,\n  .");
        FAIL("expected a SourceError");
    } catch (const SourceError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
    }
    try {
        parse_program("ok.\np(X) :- q(Y).");
        FAIL("expected a SourceError");
    } catch (const SourceError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 1);
        CHECK(e.message().find("unsafe") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_program("p(a). p(a,b)."), SourceError);
    CHECK_THROWS_AS(parse_program("p(X)."), SourceError);
    CHECK_THROWS_AS(parse_program("_p."), SourceError);
    CHECK_THROWS_AS(parse_program("v."), SourceError);
    CHECK_THROWS_AS(parse_program("p :- not."), SourceError);
    CHECK_THROWS_AS(parse_program("P."), SourceError);
    CHECK_THROWS_AS(parse_program("p() ."), SourceError);
}

TEST_CASE("printing is canonical") {
    CHECK(print_program(parse_program("p(1).")) == "p(1).\n");
    CHECK(print_rule(Rule::fact(Atom("magic_ancestor_bb", {Term::constant("p1"), Term::constant("p2")}))) ==
          "magic_ancestor_bb(p1,p2).");
    CHECK(print_rule(parse_program("a v b :- c, not d. c.").rules()[0]) == "a v b :- c, not d.");
    CHECK(print_query(parse_query("p(X,a)?")) == "p(X,a)?");
    CHECK(print_interpretation(test::atoms("b a(1)")) == "{a(1), b}");
    CHECK(print_interpretation({}) == "{}");
    // Order does not depend on insertion order.
    CHECK(print_program(parse_program("b. a. c :- a.")) == print_program(parse_program("c :- a. a. b.")));
}

TEST_CASE("round trip on fixed programs") {
    for (const char* text : {test::kGenealogy, test::kDisjunctiveKill, test::kOddLoop}) {
        const auto p = parse_program(text);
        CHECK(parse_program(print_program(p)) == p);
    }
}

TEST_CASE("round trip on generated programs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto profile = static_cast<Profile>(seed % 3);
        const auto p = random_program(seed, profile);
        const auto text = print_program(p);
        CAPTURE(text);
        CHECK(parse_program(text) == p);
        CHECK(print_program(parse_program(text)) == text);
    }
}

TEST_CASE("parsing is total on random and mutated input") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "abXY01(),.:-v|? not%\n\t_\xc3\xa9";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 40);
    std::uniform_int_distribution<int> byte(0, 255);
    std::size_t parsed = 0, rejected = 0;
    auto attempt = [&](const std::string& s) {
        try {
            parse_program(s);
            ++parsed;
        } catch (const SourceError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
            ++rejected;
        }
        try {
            parse_query(s);
        } catch (const SourceError&) {
        }
    };
    for (int k = 0; k < 3000; ++k) {
        std::string s;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) s += (k % 3 == 0) ? static_cast<char>(byte(rng)) : alphabet[pick(rng)];
        attempt(s);
    }
    // Single-character mutations of a valid program.
    const std::string valid = test::kGenealogy;
    for (int k = 0; k < 2000; ++k) {
        std::string s = valid;
        std::uniform_int_distribution<std::size_t> at(0, s.size() - 1);
        const auto i = at(rng);
        switch (k % 3) {
            case 0: s[i] = alphabet[pick(rng)]; break;
            case 1: s.erase(i, 1); break;
            default: s.insert(i, 1, alphabet[pick(rng)]); break;
        }
        attempt(s);
    }
    CHECK(parsed > 0);
    CHECK(rejected > 0);
}
