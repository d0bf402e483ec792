#include "corpus.hpp"
#include "mlc/dsl.hpp"
#include "mlc/errors.hpp"

#include <doctest.h>

using mlc::Formula;
using mlc::Modulus;
using mlc::Rat;
using mlc::Term;

TEST_CASE("parse literals and connectives") {
    CHECK(mlc::parse_formula("3/4").formula->value == Rat(3, 4));
    CHECK(mlc::parse_formula("0.25").formula->value == Rat(1, 4));
    CHECK(mlc::parse_formula("2").formula->value == Rat(2));

    const auto d = mlc::parse_formula("d(x, y)").formula;
    CHECK(d->kind == mlc::Conn::Dist);
    CHECK(d->terms[0] == Term::var("x"));

    const auto p = mlc::parse_formula("p(mul(x, inv(y)), e())").formula;
    CHECK(p->kind == mlc::Conn::Pred);
    CHECK(p->symbol == "p");
    CHECK(p->terms.size() == 2);

    CHECK(mlc::parse_formula("not(1/2)").formula->kind == mlc::Conn::Neg);
    CHECK(mlc::parse_formula("half(1/2)").formula->kind == mlc::Conn::Half);
    CHECK(mlc::parse_formula("absdiff(1, 1/2)").formula->kind == mlc::Conn::AbsDiff);
    CHECK(mlc::parse_formula("min()").formula->kind == mlc::Conn::Min);
    CHECK(mlc::parse_formula("max(1, 1/2, 0)").formula->children.size() == 3);

    const auto cm = mlc::parse_formula("cmin[5](1, 1/2)").formula;
    CHECK(cm->kind == mlc::Conn::CMin);
    CHECK(cm->family_bound == 5);
    CHECK(cm->family_modulus.is_identity());

    const auto s = mlc::parse_formula("sup x:G . d(x, e())").formula;
    CHECK(s->kind == mlc::Conn::Sup);
    CHECK(s->symbol == "x");
    CHECK(s->sort == "G");
}

TEST_CASE("sum chain is left-associative with equal precedence") {
    // a -. b +. c parses as (a -. b) +. c
    const auto f = mlc::parse_formula("1 -. 1/2 +. 1/4").formula;
    CHECK(f->kind == mlc::Conn::TruncAdd);
    CHECK(f->children[0]->kind == mlc::Conn::TruncSub);
    CHECK(f->children[1]->value == Rat(1, 4));

    // Parenthesization overrides.
    const auto g = mlc::parse_formula("1 -. (1/2 +. 1/4)").formula;
    CHECK(g->kind == mlc::Conn::TruncSub);
    CHECK(g->children[1]->kind == mlc::Conn::TruncAdd);
}

TEST_CASE("condition suffixes") {
    const auto zero = mlc::parse_formula("d(x, y) = 0");
    CHECK(zero.has_condition);
    CHECK(zero.eq_zero);
    CHECK(zero.threshold == Rat(0));

    const auto le = mlc::parse_formula("d(x, y) <= 2/3");
    CHECK(le.has_condition);
    CHECK_FALSE(le.eq_zero);
    CHECK(le.threshold == Rat(2, 3));

    const auto none = mlc::parse_formula("d(x, y)");
    CHECK_FALSE(none.has_condition);
}

TEST_CASE("formula files: named entries, comments, trailing semicolons") {
    const std::string text =
        "# matching conditions\n"
        "first := d(x, y) -. 1/2 ;\n"
        "second := sup z:G . min(d(z, x), d(z, y)) <= 1/4;\n";
    const auto entries = mlc::parse_formula_file(text);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].name == "first");
    CHECK_FALSE(entries[0].has_condition);
    CHECK(entries[1].name == "second");
    CHECK(entries[1].has_condition);
    CHECK(entries[1].threshold == Rat(1, 4));

    // Round-trip through the file printer.
    const auto again = mlc::parse_formula_file(mlc::print_formula_file(entries));
    REQUIRE(again.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(again[i].name == entries[i].name);
        CHECK(again[i].formula->equals(*entries[i].formula));
        CHECK(again[i].has_condition == entries[i].has_condition);
        CHECK(again[i].threshold == entries[i].threshold);
    }
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(mlc::parse_formula("min(1,"), mlc::ParseError);
    CHECK_THROWS_AS(mlc::parse_formula("d(x)"), mlc::ParseError);
    CHECK_THROWS_AS(mlc::parse_formula("cmin[x](1)"), mlc::ParseError);
    CHECK_THROWS_AS(mlc::parse_formula("sup x . 1"), mlc::ParseError);
    CHECK_THROWS_AS(mlc::parse_formula("1 +."), mlc::ParseError);
    CHECK_THROWS_AS(mlc::parse_formula(""), mlc::ParseError);
    CHECK_THROWS_AS(mlc::parse_formula_file("x := 1"), mlc::ParseError); // missing ';'

    try {
        mlc::parse_formula("min(1,");
    } catch (const mlc::ParseError& e) {
        CHECK(e.line() >= 1);
        CHECK(e.col() >= 1);
    }
}

TEST_CASE("print/parse round-trip on random formulas") {
    mlc::Rng rng(2024);
    const std::vector<std::string> vars = {"x", "y", "z"};
    for (int i = 0; i < 300; ++i) {
        const auto f = corpus::random_formula(rng, 4, vars);
        const std::string printed = mlc::print_formula(*f);
        const auto reparsed = mlc::parse_formula(printed);
        CHECK_FALSE(reparsed.has_condition);
        const bool same = reparsed.formula->equals(*f);
        CHECK(same);
        if (!same) {
            MESSAGE("printed: ", printed);
            break;
        }
        // Printing is canonical: a second round trip is byte-identical.
        CHECK(mlc::print_formula(*reparsed.formula) == printed);
    }
}

TEST_CASE("free variables in order of first occurrence") {
    const auto f = mlc::parse_formula("min(d(y, x), sup z:G . d(z, w))").formula;
    const auto vars = f->free_vars();
    REQUIRE(vars.size() == 3);
    CHECK(vars[0] == "y");
    CHECK(vars[1] == "x");
    CHECK(vars[2] == "w");
}

TEST_CASE("node_count counts shared subtrees once per occurrence") {
    const auto atom = Formula::dist(Term::var("x"), Term::var("y"));
    const auto twice = Formula::trunc_add(atom, atom);
    CHECK(atom->node_count() == 1);
    CHECK(twice->node_count() == 3);
}
