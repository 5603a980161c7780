#pragma once

/// Modal series solution of the fractional evolution problem
///
///   rho d_t^alpha u + A u = F,   boundary trace = f,   u(0) = u0
///   (and d_t u(0) = u1 for alpha in (1,2)),
///
/// expanded over the weighted eigenbasis {phi_n}. Each mode solves the
/// scalar fractional ODE
///
///   d_t^alpha u_n + lambda_n u_n = g_n(t),
///   g_n(t) = -(-1)^chi <f(t), trace*phi_n> + <rho^{-1}F(t), phi_n>,
///
/// whose solution is
///
///   u_n(t) = (k_n * g_n)(t) + E_{a,1}(-lambda_n t^a) <u0,phi_n>
///            [+ t E_{a,2}(-lambda_n t^a) <u1,phi_n>   for a > 1],
///
/// with k_n(t) = t^{a-1} E_{a,a}(-lambda_n t^a). Convolutions are computed
/// by product integration: the data signal g_n is interpolated piecewise
/// linearly on the time grid and the weakly singular kernel is integrated
/// exactly against that interpolant via its closed-form moments
/// t^b E_{a,b+1}(-lambda t^a). The rule is exact (to Mittag-Leffler
/// accuracy) whenever g_n is piecewise linear, in particular for constant
/// and for zero data.
///
/// Differentiating the series once and twice produces the derivative
/// series with the compatibility defects as coefficients of the singular
/// powers:
///
///   u_n'(t)  = b_n t^{a-1} E_{a,a}(-l t^a) + (k_n * g_n')(t)
///              [+ E_{a,1}(-l t^a) <u1,phi_n>],
///   u_n''(t) = b_n t^{a-2} E_{a,a-1}(-l t^a)
///              + e_n t^{a-1} E_{a,a}(-l t^a) + (k_n * g_n'')(t),
///
/// where b_n = g_n(0) - lambda_n <u0,phi_n> and
/// e_n = g_n'(0) - lambda_n <u1,phi_n> (<u1,...> read as 0 for alpha < 1)
/// are exactly the order-1 and order-2 compatibility defects. Nonzero
/// defects make the derivative singular at t = 0; those rows are stored as
/// signed infinities.

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include <fracspec/problem.hpp>
#include <fracspec/spectral_basis.hpp>

namespace fracspec {

/// Per-mode solution values on a shared time grid, plus optional derivative
/// blocks and the compatibility-defect coefficients that control the t -> 0
/// behaviour of the derivatives.
struct ModeSeries {
    std::vector<double> times;  ///< strictly increasing, starts at 0
    Eigen::MatrixXd values;     ///< N x times.size(), row n-1 = u_n

    /// Derivative blocks, same shape as `values`, present once computed by
    /// first_/second_derivative_modes. Rows at t = 0 hold signed infinities
    /// when the corresponding defect makes the power singular.
    std::optional<Eigen::MatrixXd> d1;
    std::optional<Eigen::MatrixXd> d2;

    /// Compatibility defects: b_n (order 1, always computed) and e_n
    /// (order 2, computed when the data support time derivatives; empty
    /// otherwise).
    Eigen::VectorXd defect_b;
    Eigen::VectorXd defect_e;

    // Provenance: problem parameters and which data terms contributed.
    double alpha = 0.5;
    int chi = 0;
    double horizon = 1.0;  ///< problem horizon T (grid may end earlier)
    bool has_boundary = false;
    bool has_source = false;
    bool has_initial = false;
    bool has_initial_velocity = false;

    /// Boundary signal values f_e(t_k), one row per boundary component;
    /// used by evaluate_solution's boundary lift.
    Eigen::MatrixXd boundary_values_on_grid;

    /// Energy fraction carried by the last 10% of modes, maximized over
    /// grid times (0 for the all-zero series). Values above 1e-6 indicate
    /// the truncation N is too small for the data.
    double tail_fraction = 0.0;

    int mode_count() const { return static_cast<int>(values.rows()); }
};

/// Solve all modes on the given time grid. The grid must start at 0, be
/// strictly increasing, and stay within [0, T]; modes are computed
/// independently (concurrently when threads > 1) with deterministic output.
/// Throws std::invalid_argument on grid violations, basis/problem mismatch
/// (chi or dimension), or missing u1 for alpha > 1.
ModeSeries solve_modes(const Problem& problem, const SpectralBasis& basis,
                       const std::vector<double>& grid, int threads = 1);

/// First time-derivative series on the grid of `series` (which must come
/// from solve_modes on the same problem and basis). Requires order-1 time
/// derivatives of f and F (std::invalid_argument otherwise). The result is
/// also stored into series.d1.
const Eigen::MatrixXd& first_derivative_modes(ModeSeries& series,
                                              const Problem& problem,
                                              const SpectralBasis& basis,
                                              int threads = 1);

/// Second time-derivative series; requires order-2 data derivatives.
/// Stored into series.d2.
const Eigen::MatrixXd& second_derivative_modes(ModeSeries& series,
                                               const Problem& problem,
                                               const SpectralBasis& basis,
                                               int threads = 1);

/// Closed-form modal Laplace transform at p > 0 of the zero-extended
/// solution (data cut off at T):
///
///   L u_n(p) = [ p^{a-1}<u0,phi_n> (+ p^{a-2}<u1,phi_n> for a > 1)
///                + int_0^T e^{-pt} g_n(t) dt ] / (p^a + lambda_n),
///
/// the data transform evaluated by adaptive quadrature to 1e-10 relative.
/// Throws std::domain_error for p <= 0, std::out_of_range for n outside
/// 1..N.
double mode_laplace(const Problem& problem, const SpectralBasis& basis, int n,
                    double p);

/// Point evaluation of one modal solution at an arbitrary time t >= 0
/// (t beyond the data horizon T continues the evolution with the data
/// switched off, matching the zero extension mode_laplace transforms).
/// `data_grid` supplies the product-integration nodes on [0, T]; it must
/// start at 0 and end at T. Cost is O(data_grid.size()) Mittag-Leffler
/// evaluations per call; construct once per mode and reuse.
class ModeEvaluator {
  public:
    ModeEvaluator(const Problem& problem, const SpectralBasis& basis, int n,
                  std::vector<double> data_grid);
    ModeEvaluator(ModeEvaluator&&) noexcept;
    ~ModeEvaluator();

    double value(double t) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Field reconstruction u(t_k, x_j) on an interval domain. The truncated
/// series is resummed around the boundary lift of f(t_k): the lift carries
/// the non-homogeneous boundary data exactly and the lift-relative modal
/// coefficients decay fast, so the truncation error is far below that of
/// the raw partial sum. With f = 0 this is exactly sum u_n(t) phi_n(x).
/// Rows index times, columns the query points, which must lie inside the
/// domain (std::domain_error otherwise). Rectangle domains use
/// evaluate_solution_mesh instead (std::invalid_argument here).
Eigen::MatrixXd evaluate_solution(const ModeSeries& series,
                                  const SpectralBasis& basis,
                                  const std::vector<double>& xs);

/// Field reconstruction on the basis mesh (1-D: mesh_x nodes; rectangles:
/// x-major tensor nodes, series resummed without a lift). Rows index times.
Eigen::MatrixXd evaluate_solution_mesh(const ModeSeries& series,
                                       const SpectralBasis& basis);

/// CSV export: one comment header line carrying alpha, chi, N and the grid
/// spec, a column-name row `t,u_1,...,u_N`, then one row per time with
/// shortest round-trip numbers. `block` selects values (0) or a derivative
/// block (1 or 2; throws std::invalid_argument when absent).
void write_mode_series_csv(const ModeSeries& series, std::ostream& out,
                           int block = 0);

}  // namespace fracspec
