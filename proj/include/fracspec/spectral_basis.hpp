#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <fracspec/problem.hpp>

namespace fracspec {

/// Eigen-decomposition of the elliptic operator
///   A u = rho^{-1} ( -div(a grad u) + q u )
/// with boundary kind chi (0 Dirichlet, 1 Neumann), discretised with
/// piecewise-linear finite elements on a uniform mesh (1-D), or given in
/// closed form as the tensor product of 1-D modes (rectangles, constant
/// coefficients only).
///
/// Eigenfunctions are orthonormal in L^2(rho dx) under the mesh quadrature
/// (consistent-mass inner product in 1-D, tensor trapezoid in 2-D). The sign
/// of each mode is fixed so that its first nonzero nodal value (lexicographic
/// node order) is positive, which makes construction bitwise deterministic.
///
/// `traces` hold the adjoint boundary trace of each mode:
///   chi = 0: the outward conormal derivative  a * d(phi)/d(nu)  (so the
///            left endpoint of the Dirichlet q=1 reference basis carries
///            -sqrt(2) n pi),
///   chi = 1: the boundary value of phi.
///
/// A completed basis is immutable and safe for concurrent reads.
struct SpectralBasis {
    int chi = 0;
    int dim = 1;
    Domain domain;
    Coefficients coeffs;

    /// Ascending positive eigenvalues, count N.
    Eigen::VectorXd eigenvalues;

    // --- 1-D representation -------------------------------------------------
    /// Uniform mesh nodes x_0 < ... < x_m (1-D; also the x-axis nodes of the
    /// rectangle sampling mesh).
    std::vector<double> mesh_x;
    /// Nodal eigenvector values, (m+1) x N (1-D only).
    Eigen::MatrixXd modes_1d;
    /// Consistent rho-mass matrix diagonals (1-D): main and first
    /// off-diagonal; the quadrature behind all inner products.
    Eigen::VectorXd mass_diag;
    Eigen::VectorXd mass_off;

    // --- 2-D tensor representation (constant coefficients) ------------------
    std::vector<double> mesh_y;
    /// Nodal values of the 1-D closed-form factors: (mx+1) x Jx and
    /// (my+1) x Jy; mode n is factor_x.col(jx(n)) * factor_y.col(jy(n))^T.
    Eigen::MatrixXd factor_x;
    Eigen::MatrixXd factor_y;
    /// Per-mode tensor factor indices (columns into factor_x / factor_y).
    std::vector<std::pair<int, int>> tensor_index;

    // --- boundary traces -----------------------------------------------------
    /// 1-D: 2 x N endpoint traces (left, right).
    /// 2-D: 4 x N per-edge integrals of the trace (left, right, bottom, top),
    ///      i.e. the pairing weight of a per-edge-constant datum.
    Eigen::MatrixXd traces;
    /// 2-D only: per mode and edge, Gauss samples of the trace along the edge
    /// (4 * mode-index points): abscissae, weights, trace values.
    struct EdgeTrace {
        std::vector<double> s;
        std::vector<double> w;
        std::vector<double> v;
    };
    std::vector<std::array<EdgeTrace, 4>> edge_traces;

    int mode_count() const { return static_cast<int>(eigenvalues.size()); }
};

/// Build the first N eigenpairs.
///
/// 1-D: generalized symmetric-definite tridiagonal eigensolve (stiffness from
/// a and q, mass weighted by rho) by Sturm-count bisection plus inverse
/// iteration; Dirichlet conormal traces by second-order one-sided differencing
/// of a * phi'. Requires mesh_size >= 10 N.
///
/// Rectangles require constant coefficients; modes are tensor products of
/// closed-form 1-D modes, eigenvalue ties ordered by lexicographic tensor
/// index, and mesh_size counts elements per axis.
///
/// Throws std::invalid_argument on coefficient invariant violations or a mesh
/// too coarse for the requested mode count.
SpectralBasis build_basis(const Domain& domain, const Coefficients& coeffs,
                          int chi, int N, int mesh_size);

/// Pairing of a boundary datum with the adjoint trace of mode n (1-based):
/// sum over the two endpoints (1-D) or edge integrals (rectangle) of
/// h * trace. `h` holds one constant per boundary component, ordered
/// left, right[, bottom, top]. Throws std::out_of_range for n outside 1..N.
double trace_pairing(const SpectralBasis& basis, int n,
                     const std::vector<double>& h);

/// Rectangle pairing with per-edge functions of the edge coordinate
/// (y on left/right edges, x on bottom/top), evaluated by the stored edge
/// Gauss rules.
double trace_pairing(const SpectralBasis& basis, int n,
                     const std::vector<std::function<double(double)>>& h);

/// rho-weighted quadrature inner products <g, phi_n> for n = 1..N; `nodal`
/// holds g on the mesh (1-D: mesh_x nodes; 2-D: row-major x-major over the
/// tensor mesh). Throws std::invalid_argument on shape mismatch.
Eigen::VectorXd project(const SpectralBasis& basis,
                        const std::vector<double>& nodal);

/// Projection of a spatial field: closed forms and samples are evaluated on
/// the mesh (with mismatch interpolation per SpatialField::on_mesh); modal
/// fields are taken as coefficients directly, zero-padded or truncated to N.
Eigen::VectorXd project(const SpectralBasis& basis, const SpatialField& g);

/// Nodal values of the modal sum  sum_n coeffs_n phi_n  on the basis mesh
/// (1-D: mesh_x nodes; 2-D: row-major x-major tensor mesh). `coeffs` must
/// hold one value per mode.
std::vector<double> synthesize(const SpectralBasis& basis,
                               const Eigen::VectorXd& coeffs);

/// ( sum_n c_n^2 lambda_n^{2s} )^{1/2}; negative s gives the dual norms.
double fractional_norm(const Eigen::VectorXd& coeffs,
                       const Eigen::VectorXd& eigenvalues, double s);

/// Partial sums S_N = sum_{n<=N} lambda_n^{-2(1+kappa)} |<h, trace_n>|^2 with
/// kappa = (2 theta - 1)/4; the boundary-data convergence diagnostic.
std::vector<double> lemma_l1_diagnostic(const SpectralBasis& basis,
                                        const std::vector<double>& h,
                                        double theta);

/// Columnar export/import (documented in the README): header (chi, dim, N,
/// mesh, coefficient sources), per-mode rows (lambda and traces), mass
/// diagonals and the eigenvector block (1-D) or tensor indices (2-D).
/// Round trips bit-exactly.
void save_basis(const SpectralBasis& basis, const std::string& path);
SpectralBasis load_basis(const std::string& path);

}  // namespace fracspec
