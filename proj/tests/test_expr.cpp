#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "vortex/expr.hpp"
#include "vortex/space.hpp"

using vortex::CompiledExpr;
using vortex::EvalError;
using vortex::Expression;
using vortex::ParseError;
using vortex::SpaceSpec;
using vortex::parse_expression;

namespace {
const SpaceSpec kQP({"q", "p"});  // indices: t=0, q=1, p=2

double eval_qp(const Expression& e, double t, double q, double p) {
    const std::vector<double> pt{t, q, p};
    return e.evaluate(pt);
}
}  // namespace

TEST_CASE("space validates names") {
    CHECK(kQP.dim() == 2);
    CHECK(kQP.extended_dim() == 3);
    CHECK(kQP.name(0) == "t");
    CHECK(kQP.name(2) == "p");
    CHECK(kQP.index_of("q") == 1);
    CHECK(!kQP.index_of("z").has_value());
    CHECK_THROWS_AS(SpaceSpec({"q", "q"}), std::invalid_argument);
    CHECK_THROWS_AS(SpaceSpec({"t"}), std::invalid_argument);
    CHECK_THROWS_AS(SpaceSpec(std::vector<std::string>{}), std::invalid_argument);
}

TEST_CASE("parse and evaluate arithmetic") {
    const Expression e = parse_expression("(q^2 + p^2) / 2", kQP);
    CHECK(eval_qp(e, 0.0, 3.0, 4.0) == doctest::Approx(12.5).epsilon(1e-15));

    CHECK(eval_qp(parse_expression("q - p - 2", kQP), 0, 10, 4) == doctest::Approx(4.0));
    CHECK(eval_qp(parse_expression("q / p / 2", kQP), 0, 10, 5) == doctest::Approx(1.0));
    CHECK(eval_qp(parse_expression("-q^2", kQP), 0, 3, 0) == doctest::Approx(-9.0));
    CHECK(eval_qp(parse_expression("2^-2", kQP), 0, 0, 0) == doctest::Approx(0.25));
    CHECK(eval_qp(parse_expression("t * q", kQP), 2, 5, 0) == doctest::Approx(10.0));
    CHECK(eval_qp(parse_expression("sin(q)^2 + cos(q)^2", kQP), 0, 0.7, 0) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_qp(parse_expression("exp(ln(p))", kQP), 0, 0, 2.5) == doctest::Approx(2.5));
    CHECK(eval_qp(parse_expression("sqrt(q^2 + p^2)", kQP), 0, 3, 4) == doctest::Approx(5.0));
}

TEST_CASE("parse errors carry offsets") {
    // The documented example: a dangling operator is rejected at its offset.
    try {
        parse_expression("q +* p", kQP);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }

    CHECK_THROWS_AS(parse_expression("", kQP), ParseError);
    CHECK_THROWS_AS(parse_expression("2 +", kQP), ParseError);
    CHECK_THROWS_AS(parse_expression("(q", kQP), ParseError);
    CHECK_THROWS_AS(parse_expression("q p", kQP), ParseError);
    CHECK_THROWS_AS(parse_expression("1.2.3", kQP), ParseError);

    // Unknown names and functions are named in the message.
    try {
        parse_expression("q + foo", kQP);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
    try {
        parse_expression("tan(q)", kQP);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("tan") != std::string::npos);
    }

    // Exponents must fold to constants (exact derivatives depend on it).
    try {
        parse_expression("q^p", kQP);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("constant") != std::string::npos);
    }
    CHECK_NOTHROW(parse_expression("q^(1+1)", kQP));  // folds to a constant
}

TEST_CASE("domain errors throw EvalError with the offending subtree") {
    const std::vector<double> bad{0.0, -1.0, 0.0};  // (t, q, p)
    CHECK_THROWS_AS(parse_expression("ln(q)", kQP).evaluate(bad), EvalError);
    CHECK_THROWS_AS(parse_expression("sqrt(q)", kQP).evaluate(bad), EvalError);
    CHECK_THROWS_AS(parse_expression("1 / p", kQP).evaluate(bad), EvalError);
    CHECK_THROWS_AS(parse_expression("p^-1", kQP).evaluate(bad), EvalError);
    CHECK_THROWS_AS(parse_expression("q^0.5", kQP).evaluate(bad), EvalError);

    try {
        parse_expression("2 + ln(q * q - 1)", kQP).evaluate(std::vector<double>{0.0, 1.0, 0.0});
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("ln") != std::string::npos);
    }
}

TEST_CASE("evaluate by coordinate name") {
    const Expression e = parse_expression("t + 2*q + 3*p", kQP);
    const std::map<std::string, double> pt{{"t", 1.0}, {"q", 10.0}, {"p", 100.0}};
    CHECK(e.evaluate(pt) == doctest::Approx(321.0));
}

TEST_CASE("constant folding and zero detection") {
    double v = 0.0;
    CHECK(parse_expression("2*3 + 1", kQP).is_constant(&v));
    CHECK(v == doctest::Approx(7.0));
    CHECK(parse_expression("0 * q", kQP).is_zero());
    CHECK(parse_expression("q - q", kQP).is_zero() == false);  // no deep rewriting
    CHECK(Expression().is_zero());
    CHECK(Expression::constant(0.0).is_zero());

    const Expression q = Expression::variable(kQP, 1);
    CHECK((Expression::constant(1.0) * q).print() == "q");
    CHECK((q + Expression()).print() == "q");
    CHECK(Expression::pow(q, 1.0).print() == "q");
}

TEST_CASE("variable_indices reports dependencies") {
    const Expression e = parse_expression("t + p^2", kQP);
    const auto idx = e.variable_indices();
    CHECK(idx == std::set<int>{0, 2});
}

TEST_CASE("differentiation matches central differences") {
    const SpaceSpec space({"q", "p"});
    const std::vector<std::string> exprs{
        "q^3 - 2*q*p + p^2",
        "sin(q) * exp(0.3 * p)",
        "cos(q * p)",
        "sqrt(1 + q^2 + p^2)",
        "ln(2 + q) * p",
        "q / (1 + p^2)",
        "t^2 * q + t * p",
        "exp(-(q^2 + p^2) / 2)",
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const double h = 1e-6;
    for (const auto& text : exprs) {
        const Expression e = parse_expression(text, space);
        for (int var = 0; var <= 2; ++var) {
            const Expression de = e.differentiate(var);
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<double> pt{u(rng), u(rng), u(rng)};
                std::vector<double> lo = pt, hi = pt;
                lo[var] -= h;
                hi[var] += h;
                const double fd = (e.evaluate(hi) - e.evaluate(lo)) / (2 * h);
                CHECK(de.evaluate(pt) == doctest::Approx(fd).epsilon(5e-8));
            }
        }
    }
}

TEST_CASE("derivative of integer powers is exact") {
    const Expression q = Expression::variable(kQP, 1);
    const Expression e = Expression::pow(q, 5.0);
    CHECK(eval_qp(e.differentiate(1), 0, 2.0, 0) == doctest::Approx(80.0).epsilon(1e-15));
    CHECK(eval_qp(e.differentiate(2), 0, 2.0, 0) == 0.0);
    CHECK(e.differentiate(0).is_zero());
}

TEST_CASE("print round-trips through the parser") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    const std::vector<std::string> exprs{
        "-(q + p) * 0.5",
        "q^2 - p^-2",
        "sin(q)*cos(p) - exp(q*p)",
        "1 / (2 + sqrt(q^2 + 1))",
        "t - 3.25 * q",
    };
    for (const auto& text : exprs) {
        const Expression e = parse_expression(text, kQP);
        const std::string printed = e.print();
        const Expression back = parse_expression(printed, kQP);
        CHECK(back.print() == printed);  // printing is a fixed point
        for (int trial = 0; trial < 8; ++trial) {
            const std::vector<double> pt{u(rng), u(rng), std::abs(u(rng)) + 0.1};
            CHECK(back.evaluate(pt) == doctest::Approx(e.evaluate(pt)).epsilon(1e-14));
        }
    }
}

TEST_CASE("compiled expressions agree with the tree walker") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    const std::vector<std::string> exprs{
        "(q^2 + p^2) / 2",
        "sin(q * p) - cos(t)",
        "exp(-(q^2)) * sqrt(p^2 + 1)",
        "q^3 * p - 2 * q * p^2 + 7",
        "-q + -p - -2",
    };
    for (const auto& text : exprs) {
        const Expression e = parse_expression(text, kQP);
        const CompiledExpr c(e);
        for (int trial = 0; trial < 20; ++trial) {
            const std::vector<double> pt{u(rng), u(rng), u(rng)};
            CHECK(c.evaluate(pt) == doctest::Approx(e.evaluate(pt)).epsilon(1e-15));
        }
    }
    // Domain failures surface identically.
    const CompiledExpr bad(parse_expression("ln(q)", kQP));
    CHECK_THROWS_AS(bad.evaluate(std::vector<double>{0.0, -1.0, 0.0}), EvalError);
}

TEST_CASE("default-constructed compiled expression is zero") {
    const CompiledExpr c;
    CHECK(c.evaluate(std::vector<double>{1.0, 2.0, 3.0}) == 0.0);
}
