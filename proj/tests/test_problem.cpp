#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <fracspec/expression.hpp>
#include <fracspec/problem.hpp>

using namespace fracspec;

namespace {

// Convenience: expect load_problem to fail and return the error text.
std::string load_error(const std::string& cfg) {
    try {
        (void)load_problem(cfg);
    } catch (const std::invalid_argument& ex) {
        return ex.what();
    }
    return {};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

TEST_CASE("expression: parsing, evaluation, and precedence") {
    const Expression e = parse_expression("2*t^2 + sin(pi*t) - exp(-t)/3", "t");
    const double t = 0.73;
    const double expect =
        2 * t * t + std::sin(3.14159265358979323846 * t) - std::exp(-t) / 3;
    CHECK(e(EvalPoint{t, 0, 0}) == doctest::Approx(expect).epsilon(1e-15));

    // Power binds tighter than unary minus and is right-associative.
    CHECK(parse_expression("-t^2", "t")(EvalPoint{3, 0, 0}) == -9.0);
    CHECK(parse_expression("2^3^1", "t")(EvalPoint{}) == 8.0);
    // Non-integer constant exponents go through pow.
    CHECK(parse_expression("t^0.5", "t")(EvalPoint{4, 0, 0}) ==
          doctest::Approx(2.0).epsilon(1e-15));

    CHECK(parse_expression("sqrt(x)*log(x)", "x")(EvalPoint{0, 2.5, 0}) ==
          doctest::Approx(std::sqrt(2.5) * std::log(2.5)).epsilon(1e-15));

    const Expression c = parse_expression("3*(1+1)", "t");
    CHECK(c.is_constant());
    CHECK(c.constant_value() == 6.0);
    CHECK_FALSE(c.depends_on('t'));
    CHECK(parse_expression("x*y", "xy").depends_on('y'));
}

TEST_CASE("expression: parse errors are rejected with invalid_argument") {
    CHECK_THROWS_AS((void)parse_expression("", "t"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("2 +", "t"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("tan(t)", "t"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("x", "t"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("t^x", "tx"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("foo", "t"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("(1+2", "t"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_expression("1 2", "t"), std::invalid_argument);
}

TEST_CASE("expression: symbolic derivatives are exact for the atom classes") {
    // Polynomial: second derivative of t^2 is the literal constant 2.
    const Expression t2 = parse_expression("t^2", "t");
    const Expression t2dd = t2.derivative('t').derivative('t');
    CHECK(t2dd.is_constant());
    CHECK(t2dd.constant_value() == 2.0);

    // Trig at t = 0: d/dt sin(t) = cos(0) = 1 exactly.
    const Expression s = parse_expression("sin(t)", "t");
    CHECK(s.derivative('t')(EvalPoint{0, 0, 0}) == 1.0);

    // Constants vanish identically.
    const Expression k = parse_expression("4.25", "t");
    CHECK(k.derivative('t').is_constant());
    CHECK(k.derivative('t').constant_value() == 0.0);

    // Chain/product/quotient rules against hand derivatives.
    const Expression g = parse_expression("exp(2*t)*sin(3*t)", "t");
    const Expression gd = g.derivative('t');
    for (const double tv : {0.0, 0.37, 1.4}) {
        const double expect =
            std::exp(2 * tv) * (2 * std::sin(3 * tv) + 3 * std::cos(3 * tv));
        CHECK(gd(EvalPoint{tv, 0, 0}) == doctest::Approx(expect).epsilon(1e-14));
    }
    const Expression q = parse_expression("t/(1+t^2)", "t");
    const Expression qd = q.derivative('t');
    for (const double tv : {0.0, 0.5, 2.0}) {
        const double d = 1 + tv * tv;
        CHECK(qd(EvalPoint{tv, 0, 0}) ==
              doctest::Approx((1 - tv * tv) / (d * d)).epsilon(1e-14));
    }

    // Derivative in one variable treats others as constants.
    const Expression f2 = parse_expression("x^2*y", "xy");
    CHECK(f2.derivative('x')(EvalPoint{0, 3, 5}) == 30.0);
    CHECK(f2.derivative('y')(EvalPoint{0, 3, 5}) == 9.0);

    // Regenerated source of a derivative reparses to the same values.
    const Expression re = parse_expression(gd.source(), "t");
    CHECK(re(EvalPoint{0.61, 0, 0}) ==
          doctest::Approx(gd(EvalPoint{0.61, 0, 0})).epsilon(1e-15));
}

// ---------------------------------------------------------------------------
// Time signals
// ---------------------------------------------------------------------------

TEST_CASE("time signal: closed-form derivative atoms match the contract") {
    const TimeSignal s = TimeSignal::closed_form("sin(t)");
    CHECK(signal_derivative(s, 1, 0.0) == 1.0);  // exact

    const TimeSignal c = TimeSignal::closed_form("7.5");
    CHECK(signal_derivative(c, 2, 0.4) == 0.0);  // exact

    const TimeSignal p = TimeSignal::closed_form("t^2");
    CHECK(signal_derivative(p, 2, 0.9) == 2.0);  // exact, any t
    CHECK(signal_derivative(p, 3, 0.9) == 0.0);

    const TimeSignal e = TimeSignal::closed_form("exp(2*t)");
    CHECK(signal_derivative(e, 3, 0.3) ==
          doctest::Approx(8.0 * std::exp(0.6)).epsilon(1e-14));

    CHECK(s.derivatives_available());
    CHECK_THROWS_AS((void)signal_derivative(s, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)signal_derivative(s, 4, 0.0), std::invalid_argument);
}

TEST_CASE("time signal: sampled representations interpolate and differentiate") {
    const double T = 2.0;
    const std::size_t n = 41;
    std::vector<double> quad(n), cube(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(n - 1);
        quad[i] = 3.0 + 2.0 * t + 0.5 * t * t;
        cube[i] = t * t * t;
    }

    SUBCASE("linear interpolation hits nodes and midpoints") {
        const TimeSignal s = TimeSignal::from_samples(quad, T, 1, true);
        const double h = T / static_cast<double>(n - 1);
        CHECK(s(0.0) == quad[0]);
        CHECK(s(T) == quad[n - 1]);
        CHECK(s(3 * h) == doctest::Approx(quad[3]).epsilon(1e-15));
        CHECK(s(3.5 * h) ==
              doctest::Approx(0.5 * (quad[3] + quad[4])).epsilon(1e-15));
    }

    SUBCASE("piecewise-constant interpolation holds the left sample") {
        const TimeSignal s = TimeSignal::from_samples({1.0, 2.0, 4.0}, 1.0, 0, false);
        CHECK(s(0.0) == 1.0);
        CHECK(s(0.49) == 1.0);
        CHECK(s(0.51) == 2.0);
        CHECK(s(1.0) == 4.0);
    }

    SUBCASE("divided differences are exact on matching polynomial degree") {
        const TimeSignal s = TimeSignal::from_samples(quad, T, 1, true);
        for (const double t : {0.0, 0.33, 1.0, 1.97, T}) {
            CHECK(signal_derivative(s, 1, t) ==
                  doctest::Approx(2.0 + t).epsilon(1e-12));
            CHECK(signal_derivative(s, 2, t) == doctest::Approx(1.0).epsilon(1e-10));
        }
        const TimeSignal s3 = TimeSignal::from_samples(cube, T, 1, true);
        for (const double t : {0.0, 0.71, T}) {
            CHECK(signal_derivative(s3, 2, t) ==
                  doctest::Approx(6.0 * t).epsilon(1e-9));
            CHECK(signal_derivative(s3, 3, t) == doctest::Approx(6.0).epsilon(1e-8));
        }
        // First derivative of the cubic uses a quadratic window: O(h^2) error.
        const double h = T / static_cast<double>(n - 1);
        for (const double t : {0.5, 1.5}) {
            CHECK(signal_derivative(s3, 1, t) ==
                  doctest::Approx(3.0 * t * t).epsilon(25 * h * h));
        }
    }

    SUBCASE("derivatives gated by the smoothness declaration") {
        const TimeSignal rough = TimeSignal::from_samples(quad, T, 1, false);
        CHECK_FALSE(rough.derivatives_available());
        CHECK_THROWS_AS((void)signal_derivative(rough, 1, 0.5), std::invalid_argument);
    }

    SUBCASE("evaluation outside the sampled range is a domain error") {
        const TimeSignal s = TimeSignal::from_samples(quad, T, 1, true);
        CHECK_THROWS_AS((void)s(-0.1), std::domain_error);
        CHECK_THROWS_AS((void)s(T + 0.1), std::domain_error);
        CHECK_THROWS_AS((void)signal_derivative(s, 1, T + 0.1), std::domain_error);
    }

    SUBCASE("construction rejects bad inputs") {
        CHECK_THROWS_AS(TimeSignal::from_samples({1.0}, 1.0, 1, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(TimeSignal::from_samples({1.0, 2.0}, 0.0, 1, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(TimeSignal::from_samples({1.0, 2.0}, 1.0, 3, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            TimeSignal::from_samples({1.0, std::nan("")}, 1.0, 1, false),
            std::invalid_argument);
    }
}

TEST_CASE("time signal: structural queries") {
    CHECK(TimeSignal{}.is_zero());
    CHECK(TimeSignal{}.time_constant());
    CHECK(TimeSignal::closed_form("0").is_zero());
    CHECK(TimeSignal::closed_form("3").time_constant());
    CHECK_FALSE(TimeSignal::closed_form("sin(t)").is_zero());
    CHECK_FALSE(TimeSignal::closed_form("sin(t)").time_constant());
    CHECK(TimeSignal::from_samples({0, 0, 0}, 1.0, 1, false).is_zero());
    CHECK(TimeSignal::from_samples({2, 2, 2}, 1.0, 1, false).time_constant());
    CHECK_FALSE(TimeSignal::from_samples({0, 1, 0}, 1.0, 1, false).time_constant());
}

// ---------------------------------------------------------------------------
// Spatial fields
// ---------------------------------------------------------------------------

TEST_CASE("spatial field: representations and mesh restriction") {
    std::vector<double> nodes(11);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        nodes[i] = static_cast<double>(i) / 10.0;

    SUBCASE("closed form evaluates pointwise and on meshes") {
        const SpatialField f = SpatialField::closed_form("sin(pi*x)", 1);
        CHECK(f(0.5) == doctest::Approx(1.0).epsilon(1e-15));
        const auto v = f.on_mesh(nodes);
        REQUIRE(v.size() == nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i)
            CHECK(v[i] == doctest::Approx(std::sin(3.14159265358979323846 *
                                                   nodes[i]))
                              .epsilon(1e-14));
    }

    SUBCASE("matching-size samples pass through unchanged") {
        std::vector<double> vals(nodes.size(), 1.5);
        const SpatialField f = SpatialField::from_samples(vals);
        CHECK(f.on_mesh(nodes) == vals);
    }

    SUBCASE("size-mismatched samples interpolate linearly with a warning") {
        // Linear data: interpolation is exact regardless of resolution.
        std::vector<double> coarse(6);
        for (std::size_t i = 0; i < coarse.size(); ++i)
            coarse[i] = 2.0 * (static_cast<double>(i) / 5.0) - 0.5;
        const SpatialField f = SpatialField::from_samples(coarse);
        std::vector<std::string> warnings;
        const auto v = f.on_mesh(nodes, &warnings);
        REQUIRE(warnings.size() == 1);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            CHECK(v[i] == doctest::Approx(2.0 * nodes[i] - 0.5).epsilon(1e-14));
    }

    SUBCASE("modal fields expose coefficients but no pointwise values") {
        const SpatialField f = SpatialField::from_modes({1.0, 0.5, 0.25});
        CHECK(f.kind() == SpatialField::Kind::modal);
        CHECK(f.modes().size() == 3);
        CHECK_THROWS_AS((void)f(0.5), std::invalid_argument);
        CHECK_THROWS_AS((void)f.on_mesh(nodes), std::invalid_argument);
    }

    SUBCASE("zero detection") {
        CHECK(SpatialField{}.is_zero());
        CHECK(SpatialField::closed_form("0", 1).is_zero());
        CHECK_FALSE(SpatialField::closed_form("x", 1).is_zero());
        CHECK(SpatialField::from_samples({0, 0, 0}).is_zero());
        CHECK_FALSE(SpatialField::from_modes({0, 1e-3}).is_zero());
    }
}

// ---------------------------------------------------------------------------
// Source terms
// ---------------------------------------------------------------------------

TEST_CASE("source term: separable and general forms agree") {
    const SourceTerm sep = SourceTerm::separable(
        TimeSignal::closed_form("1 + t^2"), SpatialField::closed_form("sin(pi*x)", 1));
    const SourceTerm gen = SourceTerm::general("(1 + t^2)*sin(pi*x)", 1);

    REQUIRE(sep.kind() == SourceTerm::Kind::separable);
    REQUIRE(gen.kind() == SourceTerm::Kind::general);
    for (const double t : {0.0, 0.5, 1.3}) {
        for (const double x : {0.25, 0.5, 0.9}) {
            CHECK(sep(t, x) == doctest::Approx(gen(t, x)).epsilon(1e-15));
            // d/dt (1+t^2) sin(pi x) = 2 t sin(pi x)
            const double pi = 3.14159265358979323846;
            CHECK(sep.time_derivative(1, t, x) ==
                  doctest::Approx(2 * t * std::sin(pi * x)).epsilon(1e-14));
            CHECK(gen.time_derivative(1, t, x) ==
                  doctest::Approx(2 * t * std::sin(pi * x)).epsilon(1e-14));
            CHECK(gen.time_derivative(2, t, x) ==
                  doctest::Approx(2 * std::sin(pi * x)).epsilon(1e-14));
        }
    }

    CHECK(SourceTerm{}.is_zero());
    CHECK(SourceTerm::general("0", 1).is_zero());
    CHECK(SourceTerm::general("0*t", 1).is_zero());  // folds to 0
    CHECK(SourceTerm::separable(TimeSignal::closed_form("0"),
                                SpatialField::closed_form("x", 1))
              .is_zero());
    CHECK(SourceTerm::general("sin(pi*x)", 1).time_constant());
    CHECK_FALSE(gen.time_constant());
}

// ---------------------------------------------------------------------------
// load_problem
// ---------------------------------------------------------------------------

namespace {

const char* kMinimalConfig = R"(
# minimal Dirichlet instance
[problem]
alpha = 0.5

[boundary]
left = sin(t)
right = 0
)";

const char* kRichConfig = R"(
[problem]
alpha = 1.5
chi = neumann
T = 2.5

[domain]
dim = 1
x = 0, 2

[coefficients]
rho = 1 + 0.5*x
a = 2
q = 1 + x^2

[boundary]
left_samples = 0, 0.5, 1.0, 0.5, 0
left_interp = 1
left_smooth = true
right = exp(-t)

[source]
g = 1 + t + t^2
G_modes = 1, 0.5, 0.25

[initial]
u0 = x*(2-x)
u1_samples = 0, 0.25, 0.5, 0.25, 0
)";

}  // namespace

TEST_CASE("load_problem: minimal config fills documented defaults") {
    const Problem p = load_problem(kMinimalConfig);
    CHECK(p.alpha == 0.5);
    CHECK(p.chi == 0);
    CHECK(p.T == 1.0);
    CHECK(p.domain.dim == 1);
    CHECK(p.domain.x0 == 0.0);
    CHECK(p.domain.x1 == 1.0);
    CHECK(p.coeffs.rho.is_constant());
    CHECK(p.coeffs.rho.constant_value() == 1.0);
    CHECK(p.coeffs.q.constant_value() == 1.0);
    CHECK(p.coeffs.rho_min == 1.0);
    CHECK(p.coeffs.q_min == 1.0);
    REQUIRE(p.f.size() == 2);
    CHECK(p.f[0](0.0) == 0.0);
    CHECK(p.f[0](0.4) == doctest::Approx(std::sin(0.4)).epsilon(1e-15));
    CHECK(p.f[1].is_zero());
    CHECK(p.F.is_zero());
    CHECK(p.u0.is_zero());
    CHECK_FALSE(p.u1.has_value());
}

TEST_CASE("load_problem: rich config round-trips the representations") {
    const Problem p = load_problem(kRichConfig);
    CHECK(p.alpha == 1.5);
    CHECK(p.chi == 1);
    CHECK(p.T == 2.5);
    CHECK(p.domain.x1 == 2.0);
    CHECK_FALSE(p.coeffs.all_constant());
    CHECK(p.coeffs.rho_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.coeffs.rho_max == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.coeffs.a_min == 2.0);
    REQUIRE(p.f.size() == 2);
    CHECK(p.f[0].kind() == TimeSignal::Kind::samples);
    CHECK(p.f[0].declared_smooth());
    CHECK(p.f[1].kind() == TimeSignal::Kind::closed_form);
    CHECK(p.F.kind() == SourceTerm::Kind::separable);
    CHECK(p.F.space_factor().kind() == SpatialField::Kind::modal);
    REQUIRE(p.u1.has_value());
    CHECK(p.u1->kind() == SpatialField::Kind::samples);

    // serialize -> load -> serialize is a fixed point.
    const std::string s1 = serialize(p);
    const Problem p2 = load_problem(s1);
    const std::string s2 = serialize(p2);
    CHECK(s1 == s2);

    // Field-wise equivalence spot checks after the round trip.
    CHECK(p2.alpha == p.alpha);
    CHECK(p2.chi == p.chi);
    CHECK(p2.T == p.T);
    CHECK(p2.f[0].samples() == p.f[0].samples());
    CHECK(p2.f[1](1.3) == p.f[1](1.3));
    CHECK(p2.F.time_factor()(0.7) == p.F.time_factor()(0.7));
    CHECK(p2.F.space_factor().modes() == p.F.space_factor().modes());
    CHECK(p2.u0(0.3) == p.u0(0.3));
    CHECK(p2.u1->samples() == p.u1->samples());
}

TEST_CASE("load_problem: minimal config also round-trips") {
    const Problem p = load_problem(kMinimalConfig);
    const std::string s1 = serialize(p);
    const Problem p2 = load_problem(s1);
    CHECK(serialize(p2) == s1);
}

TEST_CASE("load_problem: field-level validation errors") {
    SUBCASE("alpha = 1 is excluded") {
        const auto msg = load_error(
            "[problem]\nalpha = 1\n");
        CHECK(contains(msg, "alpha=1 excluded"));
    }
    SUBCASE("alpha out of range") {
        CHECK(contains(load_error("[problem]\nalpha = 2.5\n"), "alpha"));
        CHECK(contains(load_error("[problem]\nalpha = -0.5\n"), "alpha"));
        CHECK(contains(load_error("[problem]\nalpha = 0\n"), "alpha"));
    }
    SUBCASE("alpha required") {
        CHECK(contains(load_error("[problem]\nT = 1\n"), "alpha: required"));
    }
    SUBCASE("u1 required for alpha > 1") {
        const auto msg = load_error("[problem]\nalpha = 1.5\n");
        CHECK(contains(msg, "u1 required"));
    }
    SUBCASE("u1 must be absent for alpha < 1") {
        const auto msg =
            load_error("[problem]\nalpha = 0.5\n[initial]\nu1 = 0\n");
        CHECK(contains(msg, "u1"));
        CHECK(contains(msg, "absent"));
    }
    SUBCASE("q = 0 violates positivity") {
        const auto msg =
            load_error("[problem]\nalpha = 0.5\n[coefficients]\nq = 0\n");
        CHECK(contains(msg, "positivity"));
        CHECK(contains(msg, "q"));
    }
    SUBCASE("coefficient sign violations are caught by the scan") {
        CHECK(contains(
            load_error("[problem]\nalpha = 0.5\n[coefficients]\nrho = x - 0.5\n"),
            "rho"));
        CHECK(contains(
            load_error("[problem]\nalpha = 0.5\n[coefficients]\na = -1\n"),
            "ellipticity"));
    }
    SUBCASE("T must be positive") {
        CHECK(contains(load_error("[problem]\nalpha = 0.5\nT = 0\n"), "T"));
    }
    SUBCASE("chi restricted to the two boundary kinds") {
        CHECK(contains(load_error("[problem]\nalpha = 0.5\nchi = 2\n"), "chi"));
    }
    SUBCASE("boundary signal must be finite on [0, T]") {
        const auto msg =
            load_error("[problem]\nalpha = 0.5\n[boundary]\nleft = 1/t\n");
        CHECK(contains(msg, "left"));
        CHECK(contains(msg, "finite"));
    }
    SUBCASE("interval domains reject rectangle-only keys") {
        const auto msg =
            load_error("[problem]\nalpha = 0.5\n[boundary]\ntop = 1\n");
        CHECK(contains(msg, "top"));
        CHECK(contains(msg, "rectangle"));
    }
    SUBCASE("F and g/G are mutually exclusive") {
        const auto msg = load_error(
            "[problem]\nalpha = 0.5\n[source]\nF = 1\ng = t\nG = x\n");
        CHECK(contains(msg, "mutually exclusive"));
    }
    SUBCASE("separable source needs both factors") {
        const auto msg =
            load_error("[problem]\nalpha = 0.5\n[source]\ng = t\n");
        CHECK(contains(msg, "requires both g and G"));
    }
    SUBCASE("unknown keys and sections are reported") {
        CHECK(contains(load_error("[problem]\nalpha = 0.5\nbogus = 1\n"),
                       "unknown key"));
        CHECK(contains(load_error("[problem]\nalpha = 0.5\n[what]\nz = 1\n"),
                       "unknown section"));
    }
    SUBCASE("multiple violations are all reported at once") {
        const auto msg = load_error(
            "[problem]\nalpha = 1\nT = -2\n[coefficients]\nq = 0\n");
        CHECK(contains(msg, "alpha=1 excluded"));
        CHECK(contains(msg, "T"));
        CHECK(contains(msg, "positivity"));
    }
}

TEST_CASE("load_problem: config syntax errors carry line numbers") {
    CHECK(contains(load_error("[problem\nalpha = 0.5\n"), "line 1"));
    CHECK(contains(load_error("[problem]\nalpha\n"), "line 2"));
    CHECK(contains(load_error("alpha = 0.5\n"), "line 1"));
    CHECK(contains(load_error("[problem]\nalpha = 0.5\nalpha = 0.7\n"),
                   "duplicate"));
}

TEST_CASE("load_problem: u0 given as modal coefficients") {
    const Problem p = load_problem(
        "[problem]\nalpha = 0.5\n[initial]\nu0_modes = 1, 0, 0.5\n");
    CHECK(p.u0.kind() == SpatialField::Kind::modal);
    REQUIRE(p.u0.modes().size() == 3);
    CHECK(p.u0.modes()[2] == 0.5);
}

TEST_CASE("load_problem: general source expression in t and x") {
    const Problem p = load_problem(
        "[problem]\nalpha = 0.5\n[source]\nF = (1+t^2)*sin(pi*x)\n");
    CHECK(p.F.kind() == SourceTerm::Kind::general);
    CHECK(p.F(0.5, 0.5) == doctest::Approx(1.25).epsilon(1e-14));
    // Round trip keeps the general form.
    const Problem p2 = load_problem(serialize(p));
    CHECK(p2.F.kind() == SourceTerm::Kind::general);
    CHECK(p2.F(0.25, 0.3) == p.F(0.25, 0.3));
}
