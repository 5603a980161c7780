#pragma once

#include <vector>

#include <Eigen/Dense>

#include <fracspec/problem.hpp>
#include <fracspec/spectral_basis.hpp>

namespace fracspec {

/// Modal load coefficients <rho^{-1} G, phi_n> for n = 1..N.
///
/// Closed-form and sampled fields are evaluated on the mesh, divided by rho
/// pointwise and projected (rho cancels:  <rho^{-1} G, phi>_rho = int G phi).
/// Modal fields are taken as the weighted-load coefficients directly.
Eigen::VectorXd field_load(const SpectralBasis& basis, const SpatialField& g);

/// Modal load of the k-th time derivative of the source at time t:
/// <rho^{-1} d_t^k F(t, .), phi_n>. k = 0 is the source itself.
/// Throws std::invalid_argument if F cannot supply the derivative.
Eigen::VectorXd source_coefficients(const SpectralBasis& basis,
                                    const SourceTerm& F, double t,
                                    int time_order = 0);

/// Values (order = 0) or time derivatives of the boundary signals at time t,
/// one entry per boundary component.
std::vector<double> boundary_values(const std::vector<TimeSignal>& f, double t,
                                    int order = 0);

/// Coefficients of the steady (transposition-sense) solution of
///   A w = rho^{-1} F,   boundary data f   :
///   w_n = [ -(-1)^chi <f, trace_n> + <rho^{-1} F, phi_n> ] / lambda_n.
Eigen::VectorXd steady_solve(const SpectralBasis& basis,
                             const std::vector<double>& f_bdry,
                             const SpatialField& F);

/// Same, with the source load <rho^{-1} F, phi_n> already computed.
Eigen::VectorXd steady_solve(const SpectralBasis& basis,
                             const std::vector<double>& f_bdry,
                             const Eigen::VectorXd& load);

/// Nodal values of a smooth boundary lift y_f carrying the boundary data:
/// Dirichlet: linear interpolant of the endpoint values; Neumann: cubic with
/// the prescribed conormal derivatives a y' nu at the endpoints.
/// 1-D only (rectangle reconstructions are series-only).
std::vector<double> lift_values(const SpectralBasis& basis,
                                const std::vector<double>& f_bdry);

/// Pointwise value at x of the lift generated by a unit datum on one
/// boundary component (0 = left endpoint, 1 = right); the lift for data
/// (f_l, f_r) is f_l * lift_component(.,0,.) + f_r * lift_component(.,1,.).
/// Intervals only.
double lift_component(const SpectralBasis& basis, int component, double x);

/// Nodal reconstruction of the steady solution. In 1-D the series is summed
/// relative to the boundary lift,
///   w = y_f + sum_n ( w_n - <y_f, phi_n>_rho ) phi_n,
/// which converges fast enough to meet truncation-level accuracy; rectangles
/// sum the raw series.
std::vector<double> steady_field(const SpectralBasis& basis,
                                 const std::vector<double>& f_bdry,
                                 const SpatialField& F);

/// Modal compatibility defects of the initial data.
///
/// Order 1:  b_n = -(-1)^chi <f(0), trace_n> + <rho^{-1} F(0), phi_n>
///                 - lambda_n <u0, phi_n>,
/// the residual of u0 against the steady problem built from the initial
/// boundary and source data. Order 2 (alpha > 1 only): the same with the
/// first time derivatives and u1.
///
/// Verdicts compare the sup of the lambda-normalized magnitudes
/// lambda_n^{-1} |b_n| (i.e. coefficient-scale defects) against `tolerance`.
struct CompatReport {
    std::vector<double> defects_b;     // b_n
    std::vector<double> normalized_b;  // lambda_n^{-1} |b_n|
    bool pass_order1 = true;

    bool order2_checked = false;       // true iff alpha > 1
    std::vector<double> defects_e;     // e_n
    std::vector<double> normalized_e;  // lambda_n^{-1} |e_n|
    bool pass_order2 = true;

    double tolerance = 1e-6;
};

/// Evaluate both compatibility orders for the problem's initial data.
/// Throws std::invalid_argument if required data are missing (u1 absent for
/// alpha > 1, or boundary/source signals that cannot supply the time
/// derivative needed at order 2).
CompatReport compat_defect(const Problem& problem, const SpectralBasis& basis,
                           double tolerance = 1e-6);

/// The unique initial field satisfying the order-1 compatibility condition:
/// the steady solution of the t = 0 boundary and source data, returned as a
/// modal field. compat_defect passes on the repaired problem by construction.
SpatialField make_compatible(const Problem& problem, const SpectralBasis& basis);

}  // namespace fracspec
