#include <doctest.h>

#include <cmath>
#include <vector>

#include <fracspec/elliptic_compat.hpp>
#include <fracspec/problem.hpp>
#include <fracspec/spectral_basis.hpp>

using namespace fracspec;

namespace {

constexpr double kPi = 3.14159265358979323846;

Coefficients unit_coeffs() {
    Coefficients c;
    c.rho = Expression::constant(1.0);
    c.a = Expression::constant(1.0);
    c.q = Expression::constant(1.0);
    return c;
}

Domain unit_interval() {
    Domain d;
    d.dim = 1;
    d.x0 = 0.0;
    d.x1 = 1.0;
    return d;
}

/// Shared expensive basis for the reconstruction examples: 256 modes need a
/// fine mesh because the conormal trace error O((n pi h)^2) accumulates
/// across modes.
const SpectralBasis& fine_basis() {
    static const SpectralBasis basis =
        build_basis(unit_interval(), unit_coeffs(), 0, 256, 12800);
    return basis;
}

double l2_error(const SpectralBasis& basis, const std::vector<double>& nodal,
                const std::vector<double>& exact) {
    // Trapezoid on the uniform mesh.
    const double h = basis.mesh_x[1] - basis.mesh_x[0];
    double sum = 0.0;
    for (std::size_t i = 0; i < nodal.size(); ++i) {
        const double d = nodal[i] - exact[i];
        const double w = (i == 0 || i + 1 == nodal.size()) ? 0.5 * h : h;
        sum += w * d * d;
    }
    return std::sqrt(sum);
}

}  // namespace

TEST_CASE("steady solve satisfies the transposition identity exactly") {
    const auto& basis = fine_basis();
    const std::vector<double> f = {0.7, -1.3};
    const SpatialField F = SpatialField::closed_form("sin(3*x)+x", 1);
    const Eigen::VectorXd load = field_load(basis, F);
    const Eigen::VectorXd w = steady_solve(basis, f, F);
    for (int n = 1; n <= basis.mode_count(); ++n) {
        const double resid = basis.eigenvalues[n - 1] * w[n - 1] +
                             trace_pairing(basis, n, f) - load[n - 1];
        const double scale = std::fabs(load[n - 1]) +
                             std::fabs(trace_pairing(basis, n, f)) + 1.0;
        CHECK(std::fabs(resid) <= 1e-12 * scale);
    }
}

TEST_CASE("zero data give the zero steady solution") {
    const auto& basis = fine_basis();
    const Eigen::VectorXd w = steady_solve(basis, {0.0, 0.0}, SpatialField{});
    CHECK(w.cwiseAbs().maxCoeff() == 0.0);
    const auto nodal = steady_field(basis, {0.0, 0.0}, SpatialField{});
    for (double v : nodal) CHECK(v == 0.0);
}

TEST_CASE("constant data reconstruct the constant solution") {
    // -y'' + y = 1 with y = 1 on the boundary has solution y = 1.
    const auto& basis = fine_basis();
    const auto nodal =
        steady_field(basis, {1.0, 1.0}, SpatialField::closed_form("1", 1));
    std::vector<double> ones(nodal.size(), 1.0);
    CHECK(l2_error(basis, nodal, ones) <= 1e-4);
}

TEST_CASE("dirichlet data (1,0) reconstruct the sinh profile") {
    // -y'' + y = 0, y(0) = 1, y(1) = 0  =>  y = sinh(1-x)/sinh(1).
    const auto& basis = fine_basis();
    const auto nodal = steady_field(basis, {1.0, 0.0}, SpatialField{});
    std::vector<double> exact(nodal.size());
    const double s1 = std::sinh(1.0);
    for (std::size_t i = 0; i < exact.size(); ++i)
        exact[i] = std::sinh(1.0 - basis.mesh_x[i]) / s1;
    CHECK(l2_error(basis, nodal, exact) <= 1e-4);

    // The modal coefficients themselves match the sine series of the profile.
    const Eigen::VectorXd w = steady_solve(basis, {1.0, 0.0}, SpatialField{});
    for (int n = 1; n <= 16; ++n) {
        const double exact_c = std::sqrt(2.0) * n * kPi / (n * n * kPi * kPi + 1.0);
        CHECK(std::fabs(w[n - 1] - exact_c) <= 1e-5 * std::fabs(exact_c) + 1e-12);
    }
}

TEST_CASE("weak residual of the reconstruction decays like 1/N") {
    // Dual-norm residual of the truncated lifted series: the tail
    // sqrt( sum_{n>N} lambda_n d_n^2 ) with d the lift-relative coefficients.
    const auto& basis = fine_basis();
    const std::vector<double> f = {1.0, 0.0};
    const SpatialField F = SpatialField::closed_form("sin(3*x)+x", 1);
    const Eigen::VectorXd w = steady_solve(basis, f, F);
    const Eigen::VectorXd d = w - project(basis, lift_values(basis, f));

    // The dual-norm tail is meaningful only where the discretization resolves
    // the lift-relative coefficients (|d_n| ~ n^-3 versus a trace-error floor
    // growing ~ n h^2), so compare truncation levels below mode 32.
    auto tail = [&](int N) {
        double sum = 0.0;
        for (int n = N; n < 32; ++n)
            sum += basis.eigenvalues[n] * d[n] * d[n];
        return std::sqrt(sum);
    };
    const double t4 = tail(4), t8 = tail(8), t16 = tail(16);
    CHECK(t16 > 1e-4);  // far above the discretization noise floor
    CHECK(t8 <= 0.75 * t4);
    CHECK(t16 <= 0.75 * t8);
}

TEST_CASE("steady data re-used as initial values pass the compatibility check") {
    const auto basis = build_basis(unit_interval(), unit_coeffs(), 0, 64, 640);

    Problem p;
    p.alpha = 0.5;
    p.chi = 0;
    p.T = 1.0;
    p.domain = unit_interval();
    p.coeffs = unit_coeffs();
    p.f = {TimeSignal::closed_form("1+t"), TimeSignal::closed_form("0.5*cos(t)")};
    p.F = SourceTerm::separable(TimeSignal::closed_form("1+t^2"),
                                SpatialField::closed_form("x*(1-x)", 1));
    p.u0 = make_compatible(p, basis);

    const CompatReport rep = compat_defect(p, basis);
    CHECK(rep.pass_order1);
    CHECK(!rep.order2_checked);
    CHECK(rep.defects_e.empty());
    CHECK(rep.tolerance == 1e-6);
    for (double nb : rep.normalized_b) CHECK(nb <= 1e-8);

    // Repair invariant holds at the tighter advertised level too.
    const CompatReport tight = compat_defect(p, basis, 1e-8);
    CHECK(tight.pass_order1);
}

TEST_CASE("incompatible initial data fail with the analytic defect") {
    const auto basis = build_basis(unit_interval(), unit_coeffs(), 0, 32, 640);

    Problem p;
    p.alpha = 0.5;
    p.chi = 0;
    p.T = 1.0;
    p.domain = unit_interval();
    p.coeffs = unit_coeffs();
    p.f = {TimeSignal::closed_form("1"), TimeSignal::closed_form("0")};
    p.F = SourceTerm{};
    p.u0 = SpatialField{};  // zero

    const CompatReport rep = compat_defect(p, basis);
    CHECK(!rep.pass_order1);
    for (int n = 1; n <= 16; ++n) {
        const double expect = std::sqrt(2.0) * n * kPi;  // -(-1)^0 * trace(0)
        const double tol = expect * (n * kPi / 640.0) * (n * kPi / 640.0) + 1e-10;
        CHECK(std::fabs(rep.defects_b[static_cast<std::size_t>(n - 1)] - expect) <=
              tol);
    }
    // Normalized magnitudes are |b_n|/lambda_n.
    for (std::size_t i = 0; i < rep.normalized_b.size(); ++i)
        CHECK(rep.normalized_b[i] ==
              doctest::Approx(std::fabs(rep.defects_b[i]) / basis.eigenvalues[i])
                  .epsilon(1e-14));

    // Tolerance is honored: these defects are order 1/n, far above any
    // reasonable threshold, but pass with an absurdly large one.
    CHECK(compat_defect(p, basis, 10.0).pass_order1);
}

TEST_CASE("order-2 defects appear only for alpha above one") {
    const auto basis = build_basis(unit_interval(), unit_coeffs(), 0, 32, 640);

    Problem p;
    p.alpha = 1.5;
    p.chi = 0;
    p.T = 1.0;
    p.domain = unit_interval();
    p.coeffs = unit_coeffs();
    p.f = {TimeSignal::closed_form("t"), TimeSignal::closed_form("0")};
    p.F = SourceTerm{};
    p.u0 = SpatialField{};
    p.u1 = SpatialField{};  // zero second initial value

    // f(0) = 0 so order 1 passes; d_t f(0) = (1,0) makes order 2 fail with
    // e_n = sqrt(2) n pi.
    const CompatReport rep = compat_defect(p, basis);
    CHECK(rep.pass_order1);
    CHECK(rep.order2_checked);
    CHECK(!rep.pass_order2);
    for (int n = 1; n <= 8; ++n) {
        const double expect = std::sqrt(2.0) * n * kPi;
        const double tol = expect * (n * kPi / 640.0) * (n * kPi / 640.0) + 1e-10;
        CHECK(std::fabs(rep.defects_e[static_cast<std::size_t>(n - 1)] - expect) <=
              tol);
    }

    // Missing u1 is an error for alpha > 1.
    p.u1.reset();
    CHECK_THROWS_AS(compat_defect(p, basis), std::invalid_argument);
}

TEST_CASE("weighted loads divide the source by the density") {
    // rho = 2: modes are sin(n pi x) (rho-normalized), lambda = ((n pi)^2+1)/2,
    // and <rho^{-1} F, phi_n> with F = 1 is int sin = (1-(-1)^n)/(n pi).
    Coefficients c = unit_coeffs();
    c.rho = Expression::constant(2.0);
    const auto basis = build_basis(unit_interval(), c, 0, 16, 640);

    for (int n = 1; n <= 4; ++n) {
        const double lam = (n * n * kPi * kPi + 1.0) / 2.0;
        CHECK(basis.eigenvalues[n - 1] ==
              doctest::Approx(lam).epsilon(2.0 * (n * kPi / 640.0) *
                                               (n * kPi / 640.0) +
                                           1e-12));
    }

    const Eigen::VectorXd load =
        field_load(basis, SpatialField::closed_form("1", 1));
    for (int n = 1; n <= 8; ++n) {
        const double expect = (1.0 - std::pow(-1.0, n)) / (n * kPi);
        CHECK(std::fabs(load[n - 1] - expect) <= 2e-6);
    }

    // Separable and general source forms agree, including time derivatives.
    const SourceTerm sep = SourceTerm::separable(
        TimeSignal::closed_form("1+t^2"), SpatialField::closed_form("x", 1));
    const SourceTerm gen = SourceTerm::general("(1+t^2)*x", 1);
    for (int order : {0, 1, 2}) {
        const Eigen::VectorXd a = source_coefficients(basis, sep, 0.7, order);
        const Eigen::VectorXd b = source_coefficients(basis, gen, 0.7, order);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
    }
    // Zero source: all zero.
    CHECK(source_coefficients(basis, SourceTerm{}, 0.3).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("neumann steady solve matches the closed-form flux problem") {
    // -y'' + y = 0 with conormal data a y' nu = 1 at x = 0 (i.e. -y'(0) = 1)
    // and 0 at x = 1:  y = cosh(1-x)/sinh(1).
    const auto basis = build_basis(unit_interval(), unit_coeffs(), 1, 256, 12800);
    const auto nodal = steady_field(basis, {1.0, 0.0}, SpatialField{});
    std::vector<double> exact(nodal.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
        exact[i] = std::cosh(1.0 - basis.mesh_x[i]) / std::sinh(1.0);
    CHECK(l2_error(basis, nodal, exact) <= 1e-4);

    // Boundary lift errors: wrong component count, wrong dimension.
    CHECK_THROWS_AS(lift_values(basis, {1.0}), std::invalid_argument);
}

TEST_CASE("make_compatible of zero data is the zero field") {
    const auto basis = build_basis(unit_interval(), unit_coeffs(), 0, 16, 200);
    Problem p;
    p.alpha = 0.5;
    p.chi = 0;
    p.T = 1.0;
    p.domain = unit_interval();
    p.coeffs = unit_coeffs();
    p.f = {TimeSignal{}, TimeSignal{}};
    p.F = SourceTerm{};
    p.u0 = SpatialField{};
    const SpatialField u0s = make_compatible(p, basis);
    REQUIRE(u0s.kind() == SpatialField::Kind::modal);
    for (double c : u0s.modes()) CHECK(c == 0.0);
}
