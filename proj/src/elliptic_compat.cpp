#include <fracspec/elliptic_compat.hpp>

#include <cmath>
#include <stdexcept>

namespace fracspec {
namespace {

/// Nodal values of g / rho on the basis mesh, for the weighted load
/// <rho^{-1} g, phi>_rho = int g phi.
std::vector<double> over_rho_nodal(const SpectralBasis& basis,
                                   const std::vector<double>& nodal) {
    std::vector<double> out(nodal.size());
    if (basis.dim == 1) {
        for (std::size_t i = 0; i < nodal.size(); ++i)
            out[i] = nodal[i] /
                     basis.coeffs.rho(EvalPoint{0.0, basis.mesh_x[i], 0.0});
        return out;
    }
    const std::size_t ny = basis.mesh_y.size();
    for (std::size_t ix = 0; ix < basis.mesh_x.size(); ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            out[ix * ny + iy] =
                nodal[ix * ny + iy] /
                basis.coeffs.rho(
                    EvalPoint{0.0, basis.mesh_x[ix], basis.mesh_y[iy]});
    return out;
}

std::vector<double> eval_on_mesh(const SpectralBasis& basis,
                                 const Expression& e, double t) {
    if (basis.dim == 1) {
        std::vector<double> nodal(basis.mesh_x.size());
        for (std::size_t i = 0; i < nodal.size(); ++i)
            nodal[i] = e(EvalPoint{t, basis.mesh_x[i], 0.0});
        return nodal;
    }
    const std::size_t ny = basis.mesh_y.size();
    std::vector<double> nodal(basis.mesh_x.size() * ny);
    for (std::size_t ix = 0; ix < basis.mesh_x.size(); ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            nodal[ix * ny + iy] =
                e(EvalPoint{t, basis.mesh_x[ix], basis.mesh_y[iy]});
    return nodal;
}

}  // namespace

Eigen::VectorXd field_load(const SpectralBasis& basis, const SpatialField& g) {
    if (g.kind() == SpatialField::Kind::modal) return project(basis, g);
    if (basis.dim == 1)
        return project(basis, over_rho_nodal(basis, g.on_mesh(basis.mesh_x)));
    if (g.kind() != SpatialField::Kind::closed_form)
        throw std::invalid_argument(
            "field load: rectangle bases accept closed-form or modal fields only");
    return project(basis, over_rho_nodal(basis, eval_on_mesh(basis, g.expression(), 0.0)));
}

Eigen::VectorXd source_coefficients(const SpectralBasis& basis,
                                    const SourceTerm& F, double t,
                                    int time_order) {
    if (time_order < 0) throw std::invalid_argument("source load: negative order");
    switch (F.kind()) {
        case SourceTerm::Kind::zero:
            return Eigen::VectorXd::Zero(basis.mode_count());
        case SourceTerm::Kind::separable: {
            const double factor = time_order == 0
                                      ? F.time_factor()(t)
                                      : signal_derivative(F.time_factor(),
                                                          time_order, t);
            if (factor == 0.0) return Eigen::VectorXd::Zero(basis.mode_count());
            return factor * field_load(basis, F.space_factor());
        }
        case SourceTerm::Kind::general: {
            Expression e = F.expression();
            for (int k = 0; k < time_order; ++k) e = e.derivative('t');
            return project(basis,
                           over_rho_nodal(basis, eval_on_mesh(basis, e, t)));
        }
    }
    throw std::logic_error("source load: unknown source kind");
}

std::vector<double> boundary_values(const std::vector<TimeSignal>& f, double t,
                                    int order) {
    std::vector<double> out(f.size());
    for (std::size_t e = 0; e < f.size(); ++e)
        out[e] = order == 0 ? f[e](t) : signal_derivative(f[e], order, t);
    return out;
}

Eigen::VectorXd steady_solve(const SpectralBasis& basis,
                             const std::vector<double>& f_bdry,
                             const Eigen::VectorXd& load) {
    const int N = basis.mode_count();
    if (load.size() != N)
        throw std::invalid_argument("steady solve: one load entry per mode");
    const double bsign = basis.chi == 0 ? -1.0 : 1.0;  // -(-1)^chi
    Eigen::VectorXd w(N);
    for (int n = 1; n <= N; ++n)
        w[n - 1] = (bsign * trace_pairing(basis, n, f_bdry) + load[n - 1]) /
                   basis.eigenvalues[n - 1];
    return w;
}

Eigen::VectorXd steady_solve(const SpectralBasis& basis,
                             const std::vector<double>& f_bdry,
                             const SpatialField& F) {
    return steady_solve(basis, f_bdry, field_load(basis, F));
}

double lift_component(const SpectralBasis& basis, int component, double x) {
    if (basis.dim != 1)
        throw std::invalid_argument("boundary lift: intervals only");
    if (component != 0 && component != 1)
        throw std::out_of_range("boundary lift: component must be 0 or 1");
    const double L = basis.domain.length_x();
    const double s = (x - basis.domain.x0) / L;
    if (basis.chi == 0)
        return component == 0 ? 1.0 - s : s;
    // Cubic bump with conormal derivatives -a y'(x0) = f_l, a y'(x1) = f_r.
    if (component == 0) {
        const double al = basis.coeffs.a(EvalPoint{0.0, basis.domain.x0, 0.0});
        return (L / (3.0 * al)) * (1.0 - s) * (1.0 - s) * (1.0 - s);
    }
    const double ar = basis.coeffs.a(EvalPoint{0.0, basis.domain.x1, 0.0});
    return (L / (3.0 * ar)) * s * s * s;
}

std::vector<double> lift_values(const SpectralBasis& basis,
                                const std::vector<double>& f_bdry) {
    if (f_bdry.size() != 2)
        throw std::invalid_argument("boundary lift: two endpoint values required");
    std::vector<double> y(basis.mesh_x.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = f_bdry[0] * lift_component(basis, 0, basis.mesh_x[i]) +
               f_bdry[1] * lift_component(basis, 1, basis.mesh_x[i]);
    return y;
}

std::vector<double> steady_field(const SpectralBasis& basis,
                                 const std::vector<double>& f_bdry,
                                 const SpatialField& F) {
    const Eigen::VectorXd w = steady_solve(basis, f_bdry, F);
    if (basis.dim != 1) return synthesize(basis, w);
    const std::vector<double> lift = lift_values(basis, f_bdry);
    const Eigen::VectorXd d = w - project(basis, lift);
    std::vector<double> out = synthesize(basis, d);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += lift[i];
    return out;
}

namespace {

struct DefectRow {
    std::vector<double> defects;
    std::vector<double> normalized;
    bool pass = true;
};

DefectRow defect_row(const SpectralBasis& basis, const Eigen::VectorXd& load,
                     const std::vector<double>& f_bdry,
                     const Eigen::VectorXd& initial_coeffs, double tol) {
    const int N = basis.mode_count();
    const double bsign = basis.chi == 0 ? -1.0 : 1.0;  // -(-1)^chi
    DefectRow row;
    row.defects.resize(static_cast<std::size_t>(N));
    row.normalized.resize(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        const double lambda = basis.eigenvalues[n - 1];
        const double b = bsign * trace_pairing(basis, n, f_bdry) + load[n - 1] -
                         lambda * initial_coeffs[n - 1];
        row.defects[static_cast<std::size_t>(n - 1)] = b;
        const double nb = std::fabs(b) / lambda;
        row.normalized[static_cast<std::size_t>(n - 1)] = nb;
        if (nb > tol) row.pass = false;
    }
    return row;
}

}  // namespace

CompatReport compat_defect(const Problem& problem, const SpectralBasis& basis,
                           double tolerance) {
    CompatReport report;
    report.tolerance = tolerance;

    const auto f0 = boundary_values(problem.f, 0.0);
    const Eigen::VectorXd load0 = source_coefficients(basis, problem.F, 0.0);
    const Eigen::VectorXd u0 = project(basis, problem.u0);
    DefectRow b = defect_row(basis, load0, f0, u0, tolerance);
    report.defects_b = std::move(b.defects);
    report.normalized_b = std::move(b.normalized);
    report.pass_order1 = b.pass;

    if (problem.alpha > 1.0) {
        report.order2_checked = true;
        if (!problem.u1)
            throw std::invalid_argument(
                "compatibility check: u1 required for alpha > 1");
        const auto df0 = boundary_values(problem.f, 0.0, 1);
        const Eigen::VectorXd dload0 =
            source_coefficients(basis, problem.F, 0.0, 1);
        const Eigen::VectorXd u1 = project(basis, *problem.u1);
        DefectRow e = defect_row(basis, dload0, df0, u1, tolerance);
        report.defects_e = std::move(e.defects);
        report.normalized_e = std::move(e.normalized);
        report.pass_order2 = e.pass;
    }
    return report;
}

SpatialField make_compatible(const Problem& problem,
                             const SpectralBasis& basis) {
    const auto f0 = boundary_values(problem.f, 0.0);
    const Eigen::VectorXd w =
        steady_solve(basis, f0, source_coefficients(basis, problem.F, 0.0));
    return SpatialField::from_modes(
        std::vector<double>(w.data(), w.data() + w.size()));
}

}  // namespace fracspec
