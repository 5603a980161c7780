#pragma once

#include <optional>
#include <string>
#include <vector>

#include <fracspec/expression.hpp>

namespace fracspec {

// ---------------------------------------------------------------------------
// Time signals
// ---------------------------------------------------------------------------

/// Scalar signal on [0, T]: either a closed-form expression in t, or uniform
/// samples over [0, T] (endpoints included) with interpolation order 0
/// (piecewise constant) or 1 (piecewise linear).
///
/// Derivatives are exact symbolic derivatives for closed forms. For sampled
/// signals they are available only when the samples were declared smooth, and
/// are computed from the local divided-difference polynomial through the
/// order+2 nodes nearest the query point (second-order accurate, exact for
/// polynomial samples up to degree order+1).
///
/// Immutable after construction; concurrent reads are safe.
class TimeSignal {
public:
    enum class Kind { closed_form, samples };

    /// The zero signal (closed form).
    TimeSignal();

    /// Closed-form expression in t. Throws std::invalid_argument on parse
    /// errors.
    static TimeSignal closed_form(const std::string& expr_text);

    static TimeSignal from_samples(std::vector<double> values, double horizon,
                                   int interp_order, bool smooth);

    Kind kind() const { return kind_; }

    /// Signal value. Sampled signals reject t outside [0, horizon]
    /// (std::domain_error); closed forms evaluate anywhere.
    double operator()(double t) const;

    /// True when derivative queries of orders 1..3 are permitted.
    bool derivatives_available() const;

    /// d^order/dt^order at t, order in {1, 2, 3}. Throws
    /// std::invalid_argument when the representation does not support
    /// derivatives or the order is out of range.
    double derivative(int order, double t) const;

    /// Structurally zero (the constant 0, or all-zero samples).
    bool is_zero() const;

    /// No time dependence (constant expression, or constant samples).
    bool time_constant() const;

    // Representation access (serialization, solvers).
    const Expression& expression() const;
    const std::vector<double>& samples() const { return samples_; }
    double horizon() const { return horizon_; }
    int interp_order() const { return interp_; }
    bool declared_smooth() const { return smooth_; }

private:
    Kind kind_ = Kind::closed_form;
    Expression expr_;
    Expression dexpr_[3];  // symbolic d/dt, d²/dt², d³/dt³ (closed form)
    std::vector<double> samples_;
    double horizon_ = 0.0;
    int interp_ = 1;
    bool smooth_ = false;
};

/// Derivative of order 1, 2, or 3 of a time signal at t.
/// Exact for closed-form representations; divided differences for samples
/// with declared smoothness. Throws std::invalid_argument when the
/// representation does not support derivatives.
double signal_derivative(const TimeSignal& sig, int order, double t);

// ---------------------------------------------------------------------------
// Spatial fields
// ---------------------------------------------------------------------------

/// Spatial datum: closed-form expression in x (and y on rectangles), nodal
/// samples on a uniform mesh over the domain (endpoints included), or modal
/// coefficients with respect to the eigenbasis (rough data with no pointwise
/// representation).
class SpatialField {
public:
    enum class Kind { closed_form, samples, modal };

    /// The zero field (closed form).
    SpatialField();

    /// Closed-form expression; dim selects the allowed variables
    /// (1 -> x, 2 -> x and y).
    static SpatialField closed_form(const std::string& expr_text, int dim);

    /// Nodal values on a uniform mesh spanning the domain, endpoints
    /// included; at least two values.
    static SpatialField from_samples(std::vector<double> nodal_values);

    /// Coefficients with respect to the eigenfunction basis, mode 1 first.
    static SpatialField from_modes(std::vector<double> coefficients);

    Kind kind() const { return kind_; }
    bool is_zero() const;

    /// Pointwise value (closed form only; throws std::invalid_argument for
    /// sampled and modal fields).
    double operator()(double x, double y = 0.0) const;

    /// Values at the given ascending 1-D mesh nodes. Samples whose length
    /// differs from the mesh are linearly interpolated (positions inferred
    /// uniformly over [nodes.front(), nodes.back()]); a warning is appended
    /// to *warnings when given, otherwise written to stderr. Modal fields
    /// have no pointwise representation and throw std::invalid_argument.
    std::vector<double> on_mesh(const std::vector<double>& nodes,
                                std::vector<std::string>* warnings = nullptr) const;

    /// Modal coefficients (modal kind only).
    const std::vector<double>& modes() const;

    // Representation access.
    const Expression& expression() const;
    const std::vector<double>& samples() const { return values_; }

private:
    Kind kind_ = Kind::closed_form;
    Expression expr_;
    std::vector<double> values_;  // nodal samples or modal coefficients
};

// ---------------------------------------------------------------------------
// Source term
// ---------------------------------------------------------------------------

/// Source term F of the evolution problem: zero, separable g(t)*G(x), or a
/// general closed-form expression in t and x (and y).
class SourceTerm {
public:
    enum class Kind { zero, separable, general };

    /// The zero source.
    SourceTerm();

    static SourceTerm separable(TimeSignal g, SpatialField G);

    /// General closed form in (t, x[, y]).
    static SourceTerm general(const std::string& expr_text, int dim);

    Kind kind() const { return kind_; }
    bool is_zero() const;
    bool time_constant() const;

    /// True when time-derivative queries are permitted.
    bool derivatives_available() const;

    /// Pointwise value F(t, x[, y]). Separable sources require a pointwise
    /// spatial factor (closed form or samples are not evaluable pointwise:
    /// closed form only).
    double operator()(double t, double x, double y = 0.0) const;

    /// Pointwise time derivative of order 1..3.
    double time_derivative(int order, double t, double x, double y = 0.0) const;

    // Separable representation access.
    const TimeSignal& time_factor() const;
    const SpatialField& space_factor() const;
    // General representation access.
    const Expression& expression() const;

private:
    Kind kind_ = Kind::zero;
    TimeSignal g_;
    SpatialField G_;
    Expression expr_;
    Expression dexpr_[3];  // symbolic time derivatives (general kind)
};

// ---------------------------------------------------------------------------
// Domain and coefficients
// ---------------------------------------------------------------------------

/// Interval (x0, x1) or axis-aligned rectangle (x0, x1) x (y0, y1).
struct Domain {
    int dim = 1;
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;

    double length_x() const { return x1 - x0; }
    double length_y() const { return y1 - y0; }
    /// Number of boundary components carrying data: 2 endpoints in 1-D,
    /// 4 edges on a rectangle (order: left, right, bottom, top).
    int boundary_count() const { return dim == 1 ? 2 : 4; }
};

/// Elliptic operator data: density rho, diffusivity a, potential q, all
/// closed-form in x (and y). Validation establishes the bounds
/// rho >= rho_min > 0 (density), a >= a_min > 0 (ellipticity) and
/// q >= q_min > 0 (positivity), recorded here after a dense sampling scan.
struct Coefficients {
    Expression rho = Expression::constant(1.0);
    Expression a = Expression::constant(1.0);
    Expression q = Expression::constant(1.0);

    // Sampled bounds, filled by validate_coefficients.
    double rho_min = 0.0;
    double rho_max = 0.0;
    double a_min = 0.0;
    double q_min = 0.0;

    bool all_constant() const {
        return rho.is_constant() && a.is_constant() && q.is_constant();
    }
};

/// Scan the coefficients over a dense grid on the domain, fill the recorded
/// bounds, and return field-level error messages for violated invariants
/// (empty when all invariants hold).
std::vector<std::string> validate_coefficients(const Domain& domain,
                                               Coefficients& coeffs);

// ---------------------------------------------------------------------------
// Problem
// ---------------------------------------------------------------------------

/// A validated initial boundary value problem instance
///
///   rho * d_t^alpha u + (-div(a grad u) + q u) = F   on (0,T) x domain,
///   boundary trace (chi = 0: value, chi = 1: conormal flux) = f,
///   u(0) = u0, and d_t u(0) = u1 when alpha > 1.
///
/// Instances are produced by load_problem and are immutable by convention;
/// concurrent reads are safe.
struct Problem {
    double alpha = 0.5;  ///< fractional order, in (0,1) or (1,2)
    int chi = 0;         ///< boundary kind: 0 Dirichlet, 1 Neumann
    double T = 1.0;      ///< time horizon, > 0
    Domain domain;
    Coefficients coeffs;
    /// One scalar signal per boundary point (1-D: left, right) or edge
    /// (rectangle: left, right, bottom, top); constant along each edge.
    std::vector<TimeSignal> f;
    SourceTerm F;
    SpatialField u0;
    /// Present exactly when alpha > 1 (second initial condition).
    std::optional<SpatialField> u1;
};

/// Parse and validate a problem description (the config grammar documented
/// in the README: [section] headers, key = value lines, '#' comments,
/// comma-separated arrays). Throws std::invalid_argument carrying one
/// field-level message per line for every violation found; a Problem is
/// returned only when validation passes in full.
Problem load_problem(const std::string& config_text);

/// load_problem on the contents of a file.
Problem load_problem_file(const std::string& path);

/// Canonical config text for a problem; load_problem(serialize(p)) reparses
/// to an equivalent problem (expression sources verbatim, numbers in
/// shortest round-trip form).
std::string serialize(const Problem& p);

}  // namespace fracspec
