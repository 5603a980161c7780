#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include <fracspec/problem.hpp>
#include <fracspec/spectral_basis.hpp>

namespace fracspec {

// ---------------------------------------------------------------------------
// Finite-difference oracles
// ---------------------------------------------------------------------------
//
// Independent cross-checks of the modal solver on 1-D problems: an implicit
// Caputo-L1 time stepper (alpha in (0,1)) and Talbot inversion of the
// discrete-resolvent Laplace representation (alpha in (0,1) and (1,2)).
// Space is discretised by the conservative second-order three-point scheme
//   (A_h u)_i = [-a_{i-1/2} u_{i-1} + (a_{i-1/2}+a_{i+1/2}) u_i
//                - a_{i+1/2} u_{i+1}] / h^2 + q_i u_i
// on uniform nodes. Dirichlet boundary rows are pinned to the datum; Neumann
// data enter through the ghost-point flux rows
//   2 a_{1/2} (u_0 - u_1) / h^2 + q_0 u_0 = F_0 + (2/h) f_left
// (and symmetrically on the right), which is exact for linear profiles.
//
// These are deliberately simple O(K^2)-history, banded-solve oracles:
// correctness and independence from the modal machinery over speed.

/// Discretisation parameters shared by both oracle paths.
struct FDScheme {
    std::size_t mesh_cells = 400;   ///< spatial cells (mesh_cells+1 nodes)
    double dt = 5e-4;               ///< L1 time step (adjusted to divide T)
    std::size_t talbot_nodes = 32;  ///< contour nodes per inversion
    std::size_t threads = 1;        ///< Talbot time points solved in parallel
};

/// Field samples on the space-time product grid, row k = time times[k].
struct FDField {
    std::vector<double> times;
    std::vector<double> mesh;
    Eigen::MatrixXd values;  ///< times.size() x mesh.size()
};

/// Assembled three-point rows of A_h (see the file comment). The boundary
/// rows hold the Neumann ghost-flux form; Dirichlet solves overwrite them
/// with pinned identity rows, and apply() skips them entirely.
struct FDOperator {
    std::vector<double> mesh;  ///< nodes x_0..x_M
    double h = 0.0;
    Eigen::VectorXd rho;              ///< nodal density (time-term weight)
    Eigen::VectorXd sub, diag, sup;   ///< tridiagonal rows of A_h
    double flux_scale = 0.0;          ///< 2/h, multiplies Neumann data

    /// A_h applied to nodal values; boundary entries are set to zero (the
    /// boundary rows enforce data, they do not approximate the operator).
    Eigen::VectorXd apply(const Eigen::VectorXd& nodal) const;
};

/// Talbot inversion could not certify its result (node diagnostics in
/// what()). Maps to the numerical-failure exit path in the CLI.
class ContourFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// L1 weights b_j = (j+1)^{1-alpha} - j^{1-alpha}, j = 0..count-1. The
/// caller applies the scaling dt^{-alpha}/Gamma(2-alpha). Throws
/// std::domain_error for alpha outside (0,1), std::invalid_argument for
/// count = 0.
std::vector<double> caputo_l1_weights(double alpha, std::size_t count);

/// L1 approximation of the Caputo derivative of order alpha at each node of
/// a uniform grid t_k = k*dt (exact for linear samples; first entry is 0).
/// Throws std::invalid_argument for fewer than 2 samples or dt <= 0, and
/// std::domain_error for alpha outside (0,1).
std::vector<double> caputo_apply(double alpha,
                                 const std::vector<double>& samples,
                                 double dt);

/// Assemble A_h for the problem's coefficients on mesh_cells uniform cells.
/// The basis realises sampled/modal data fields elsewhere; assembly itself
/// only reads the closed-form coefficients. 1-D only.
FDOperator assemble_fd_operator(const Problem& p, std::size_t mesh_cells);

/// Implicit L1 stepping of rho d_t^alpha u + A_h u = F over K = round(T/dt)
/// uniform steps (dt adjusted to land on T exactly). History sums are direct
/// O(K^2). Supports alpha in (0,1) only; alpha in (1,2) is served by
/// fd_solve_talbot and the closed-form modal solutions instead
/// (std::invalid_argument). The basis realises sampled/modal data on the FD
/// mesh; closed-form data never touch it.
FDField fd_solve_l1(const Problem& p, const SpectralBasis& basis,
                    const FDScheme& scheme);

/// Talbot inversion of the discrete resolvent at the given times (> 0):
///   (rho p^alpha + A_h) u^(p) = rho (p^{alpha-1} u0 [+ p^{alpha-2} u1])
///                               + LF(p),
/// boundary rows carrying Lf(p), over the cotangent contour
/// p(theta) = r theta (cot theta + i), r = 2 M / (5 t), theta in (-pi, pi),
/// with M = talbot_nodes. Data transforms respect the 1_{(0,T)} cutoff and
/// causality (content of the data beyond the evaluation time cannot affect
/// the value, so transforms are truncated at min(t, T), which also keeps the
/// integrand bounded on the left contour arc). Each value is certified by a
/// second quadrature phase on the same contour; on disagreement the node
/// count is doubled once, then ContourFailure is thrown with diagnostics.
///
/// For alpha > 1 the resolvent poles sit on the rays arg p = +-pi/alpha, and
/// poles above the contour crest contribute at most
/// exp(-(2 pi M / 5)|cot(pi/alpha)|) relative amplitude; the same
/// double-once-then-fail policy applies when that bound exceeds 1e-5 (with
/// the default 32 nodes this supports alpha up to about 1.82). Dirichlet
/// boundary rows are set to the exact datum after inversion (the transform
/// of data cut off at s = t inverts to half the jump at the cut).
FDField fd_solve_talbot(const Problem& p, const SpectralBasis& basis,
                        const FDScheme& scheme,
                        const std::vector<double>& times);

/// CSV export as (t, x, value) triples, one row per grid point, shortest
/// round-trip number formatting.
void write_field_csv(const FDField& field, std::ostream& out);

}  // namespace fracspec
