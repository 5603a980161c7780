#include <fracspec/fd_oracle.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fracspec/detail/parallel_for.hpp>
#include <fracspec/gamma.hpp>
#include <fracspec/numfmt.hpp>
#include <fracspec/quadrature.hpp>

namespace fracspec {

namespace {

using cplx = std::complex<double>;

// Escaped-pole amplitude bound above which an alpha > 1 inversion cannot be
// certified (see fd_solve_talbot in the header).
constexpr double kPoleGate = 1e-5;
// Quadrature-phase disagreement (relative to the field sup) treated as a
// contour failure.
constexpr double kAgreeTol = 1e-4;

// ---------------------------------------------------------------------------
// Tridiagonal solves (no pivoting: every system assembled here is strictly
// diagonally dominant in the real case; complex resolvent rows can only
// degenerate at a resolvent pole, which the contour-failure path reports).
// ---------------------------------------------------------------------------

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

template <class T>
void thomas_solve(const Vec<T>& sub, Vec<T> diag, const Vec<T>& sup,
                  Vec<T>& rhs) {
    const Eigen::Index n = diag.size();
    for (Eigen::Index i = 1; i < n; ++i) {
        const T m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

/// Pre-factored real tridiagonal for the repeated L1 steps.
struct TriFactor {
    Eigen::VectorXd mult, dhat, sup;

    TriFactor(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag,
              Eigen::VectorXd sup_in)
        : mult(Eigen::VectorXd::Zero(diag.size())),
          dhat(diag),
          sup(std::move(sup_in)) {
        for (Eigen::Index i = 1; i < dhat.size(); ++i) {
            mult[i] = sub[i] / dhat[i - 1];
            dhat[i] -= mult[i] * sup[i - 1];
        }
    }

    void solve(Eigen::VectorXd& rhs) const {
        const Eigen::Index n = dhat.size();
        for (Eigen::Index i = 1; i < n; ++i) rhs[i] -= mult[i] * rhs[i - 1];
        rhs[n - 1] /= dhat[n - 1];
        for (Eigen::Index i = n - 2; i >= 0; --i)
            rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / dhat[i];
    }
};

// ---------------------------------------------------------------------------
// Data realisation on the FD mesh
// ---------------------------------------------------------------------------

Eigen::VectorXd nodal_field(const SpatialField& g, const SpectralBasis& basis,
                            const std::vector<double>& nodes) {
    std::vector<std::string> sink;  // expected interpolation, not user error
    std::vector<double> vals;
    if (g.kind() == SpatialField::Kind::modal) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(basis.mode_count());
        const auto& m = g.modes();
        for (std::size_t i = 0;
             i < m.size() && i < static_cast<std::size_t>(c.size()); ++i)
            c[static_cast<Eigen::Index>(i)] = m[i];
        vals = SpatialField::from_samples(synthesize(basis, c))
                   .on_mesh(nodes, &sink);
    } else {
        vals = g.on_mesh(nodes, &sink);
    }
    return Eigen::Map<const Eigen::VectorXd>(
               vals.data(), static_cast<Eigen::Index>(vals.size()))
        .eval();
}

/// Boundary datum value honouring the 1_{(0,T)} cutoff.
double boundary_value(const TimeSignal& sig, double t, double T) {
    return t <= T ? sig(t) : 0.0;
}

void validate_problem(const Problem& p) {
    if (p.domain.dim != 1)
        throw std::invalid_argument(
            "fd oracle: only 1-D interval problems are supported");
    if (p.f.size() != 2)
        throw std::invalid_argument(
            "fd oracle: boundary signal count does not match the domain");
    if (p.alpha > 1.0 && !p.u1.has_value())
        throw std::invalid_argument("fd oracle: u1 required for alpha > 1");
}

void validate_scheme(const FDScheme& scheme) {
    if (scheme.mesh_cells < 10)
        throw std::invalid_argument("fd oracle: mesh_cells must be >= 10");
    if (!(scheme.dt > 0.0))
        throw std::invalid_argument("fd oracle: dt must be > 0");
    if (scheme.talbot_nodes < 8)
        throw std::invalid_argument("fd oracle: talbot_nodes must be >= 8");
}

// ---------------------------------------------------------------------------
// Shifted Laplace transforms: J(p, t) = \int_0^{min(t,T)} e^{p(t-s)} g(s) ds.
// The e^{pt} factor of the inversion integrand is absorbed here so the
// integrand stays bounded on the left contour arc (|e^{p(t-s)}| <= 1 for
// Re p <= 0, <= e^{2M/5} on the right crossing).
// ---------------------------------------------------------------------------

cplx shifted_signal_transform(const TimeSignal& sig, cplx p, double t,
                              double T) {
    if (sig.is_zero()) return {};
    const double tc = std::min(t, T);
    if (!(tc > 0.0)) return {};
    auto f = [&](double s) { return std::exp(p * (t - s)) * sig(s); };
    quad::Options opt;
    opt.rel_tol = 1e-11;
    opt.max_depth = 16;
    if (sig.kind() == TimeSignal::Kind::samples) {
        // Piecewise-polynomial data: break at the sample nodes.
        std::vector<double> brk{0.0};
        const auto& vals = sig.samples();
        const double step =
            sig.horizon() / static_cast<double>(vals.size() - 1);
        for (std::size_t j = 1; j + 1 < vals.size(); ++j) {
            const double s = step * static_cast<double>(j);
            if (s < tc) brk.push_back(s);
        }
        brk.push_back(tc);
        return quad::adaptive_gauss_segmented(f, brk, opt).value;
    }
    return quad::adaptive_gauss(f, 0.0, tc, opt).value;
}

cplx shifted_source_transform(const SourceTerm& F, double x, cplx p, double t,
                              double T) {
    const double tc = std::min(t, T);
    if (!(tc > 0.0)) return {};
    auto f = [&](double s) { return std::exp(p * (t - s)) * F(s, x); };
    quad::Options opt;
    opt.rel_tol = 1e-11;
    opt.max_depth = 16;
    return quad::adaptive_gauss(f, 0.0, tc, opt).value;
}

// ---------------------------------------------------------------------------
// Talbot machinery
// ---------------------------------------------------------------------------

struct TalbotWorkspace {
    const Problem& p;
    const FDOperator& op;
    Eigen::VectorXd u0n;
    Eigen::VectorXd u1n;        // zero unless alpha > 1
    Eigen::VectorXd src_space;  // separable source spatial factor, nodal
    bool separable = false;
    bool general = false;
};

/// e^{pt} u^(p): the resolvent solve with the exponential absorbed into the
/// right-hand side.
Eigen::VectorXcd resolvent_solve(const TalbotWorkspace& w, cplx p, double t) {
    const Eigen::Index n = static_cast<Eigen::Index>(w.op.mesh.size());
    const double alpha = w.p.alpha;
    const cplx pa = std::pow(p, alpha);
    const cplx pam1 = pa / p;
    const cplx ept = std::exp(p * t);

    Eigen::VectorXcd sub = w.op.sub.cast<cplx>();
    Eigen::VectorXcd diag = w.op.diag.cast<cplx>();
    Eigen::VectorXcd sup = w.op.sup.cast<cplx>();
    Eigen::VectorXcd rhs(n);

    const cplx jg = w.separable ? shifted_signal_transform(
                                      w.p.F.time_factor(), p, t, w.p.T)
                                : cplx{};
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx val = w.op.rho[i] * pam1 * w.u0n[i] * ept;
        if (alpha > 1.0) val += w.op.rho[i] * (pam1 / p) * w.u1n[i] * ept;
        if (w.separable) val += jg * w.src_space[i];
        if (w.general)
            val += shifted_source_transform(w.p.F, w.op.mesh[
                static_cast<std::size_t>(i)], p, t, w.p.T);
        rhs[i] = val;
        diag[i] += w.op.rho[i] * pa;
    }

    const cplx jf0 = shifted_signal_transform(w.p.f[0], p, t, w.p.T);
    const cplx jf1 = shifted_signal_transform(w.p.f[1], p, t, w.p.T);
    if (w.p.chi == 0) {
        diag[0] = 1.0;
        sup[0] = 0.0;
        rhs[0] = jf0;
        diag[n - 1] = 1.0;
        sub[n - 1] = 0.0;
        rhs[n - 1] = jf1;
    } else {
        rhs[0] += w.op.flux_scale * jf0;
        rhs[n - 1] += w.op.flux_scale * jf1;
    }
    thomas_solve(sub, std::move(diag), sup, rhs);
    return rhs;
}

/// One uniform rule over the cotangent contour: midpoint
/// (theta_k = (k+1/2)pi/M) or trapezoid (theta_k = k pi/M, half weight at
/// theta = 0; the theta = pi endpoint carries a vanishing integrand). Both
/// converge spectrally; their disagreement is the failure detector.
Eigen::VectorXd talbot_rule(const TalbotWorkspace& w, double t, int nodes,
                            bool trapezoid) {
    const Eigen::Index n = static_cast<Eigen::Index>(w.op.mesh.size());
    const double r = 2.0 * nodes / (5.0 * t);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < nodes; ++k) {
        const double theta =
            (trapezoid ? k : k + 0.5) * M_PI / static_cast<double>(nodes);
        const double weight = (trapezoid && k == 0) ? 0.5 : 1.0;
        cplx p, dp;
        if (theta == 0.0) {
            p = r;
            dp = cplx(0.0, r);
        } else {
            const double c = std::cos(theta) / std::sin(theta);
            p = cplx(r * theta * c, r * theta);
            dp = cplx(r * (c - theta * (1.0 + c * c)), r);
        }
        const Eigen::VectorXcd v = resolvent_solve(w, p, t);
        acc += weight * (v * dp).imag();
    }
    return acc / static_cast<double>(nodes);
}

/// Relative amplitude bound of resolvent poles above the contour crest
/// (alpha > 1 only; see header).
double escaped_pole_bound(double alpha, int nodes) {
    if (alpha <= 1.0) return 0.0;
    const double cot = std::fabs(std::cos(M_PI / alpha) /
                                 std::sin(M_PI / alpha));
    return std::exp(-(2.0 * M_PI * nodes / 5.0) * cot);
}

}  // namespace

// ---------------------------------------------------------------------------
// Weights and discrete Caputo derivative
// ---------------------------------------------------------------------------

std::vector<double> caputo_l1_weights(double alpha, std::size_t count) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error(
            "caputo_l1_weights: alpha must lie in (0, 1)");
    if (count == 0)
        throw std::invalid_argument("caputo_l1_weights: count must be >= 1");
    std::vector<double> b(count);
    const double e = 1.0 - alpha;
    for (std::size_t j = 0; j < count; ++j)
        b[j] = std::pow(static_cast<double>(j + 1), e) -
               std::pow(static_cast<double>(j), e);
    return b;
}

std::vector<double> caputo_apply(double alpha,
                                 const std::vector<double>& samples,
                                 double dt) {
    if (samples.size() < 2)
        throw std::invalid_argument("caputo_apply: need at least 2 samples");
    if (!(dt > 0.0))
        throw std::invalid_argument("caputo_apply: dt must be > 0");
    const auto b = caputo_l1_weights(alpha, samples.size() - 1);
    const double c = std::pow(dt, -alpha) * reciprocal_gamma(2.0 - alpha);
    std::vector<double> out(samples.size(), 0.0);
    for (std::size_t k = 1; k < samples.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc += b[j] * (samples[k - j] - samples[k - j - 1]);
        out[k] = c * acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operator assembly
// ---------------------------------------------------------------------------

FDOperator assemble_fd_operator(const Problem& p, std::size_t mesh_cells) {
    if (p.domain.dim != 1)
        throw std::invalid_argument(
            "fd oracle: only 1-D interval problems are supported");
    if (mesh_cells < 10)
        throw std::invalid_argument("fd oracle: mesh_cells must be >= 10");

    const auto M = static_cast<Eigen::Index>(mesh_cells);
    FDOperator op;
    op.h = p.domain.length_x() / static_cast<double>(mesh_cells);
    op.flux_scale = 2.0 / op.h;
    op.mesh.resize(mesh_cells + 1);
    for (std::size_t i = 0; i <= mesh_cells; ++i)
        op.mesh[i] = p.domain.x0 + op.h * static_cast<double>(i);
    op.mesh.back() = p.domain.x1;

    Eigen::VectorXd a_half(M);
    for (Eigen::Index i = 0; i < M; ++i) {
        const double xm = op.mesh[static_cast<std::size_t>(i)] + 0.5 * op.h;
        a_half[i] = p.coeffs.a(EvalPoint{0.0, xm, 0.0});
    }
    op.rho.resize(M + 1);
    Eigen::VectorXd q(M + 1);
    for (Eigen::Index i = 0; i <= M; ++i) {
        const EvalPoint at{0.0, op.mesh[static_cast<std::size_t>(i)], 0.0};
        op.rho[i] = p.coeffs.rho(at);
        q[i] = p.coeffs.q(at);
    }

    const double h2 = op.h * op.h;
    op.sub = Eigen::VectorXd::Zero(M + 1);
    op.diag = Eigen::VectorXd::Zero(M + 1);
    op.sup = Eigen::VectorXd::Zero(M + 1);
    for (Eigen::Index i = 1; i < M; ++i) {
        op.sub[i] = -a_half[i - 1] / h2;
        op.sup[i] = -a_half[i] / h2;
        op.diag[i] = (a_half[i - 1] + a_half[i]) / h2 + q[i];
    }
    // Neumann ghost-flux boundary rows (Dirichlet solves pin these instead).
    op.diag[0] = 2.0 * a_half[0] / h2 + q[0];
    op.sup[0] = -2.0 * a_half[0] / h2;
    op.diag[M] = 2.0 * a_half[M - 1] / h2 + q[M];
    op.sub[M] = -2.0 * a_half[M - 1] / h2;
    return op;
}

Eigen::VectorXd FDOperator::apply(const Eigen::VectorXd& nodal) const {
    if (nodal.size() != static_cast<Eigen::Index>(mesh.size()))
        throw std::invalid_argument(
            "fd oracle: nodal vector does not match the mesh");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nodal.size());
    for (Eigen::Index i = 1; i + 1 < nodal.size(); ++i)
        out[i] = sub[i] * nodal[i - 1] + diag[i] * nodal[i] +
                 sup[i] * nodal[i + 1];
    return out;
}

// ---------------------------------------------------------------------------
// L1 stepping
// ---------------------------------------------------------------------------

FDField fd_solve_l1(const Problem& p, const SpectralBasis& basis,
                    const FDScheme& scheme) {
    validate_problem(p);
    validate_scheme(scheme);
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        throw std::invalid_argument(
            "fd oracle: the L1 path supports alpha in (0,1); use "
            "fd_solve_talbot for alpha > 1");

    const FDOperator op = assemble_fd_operator(p, scheme.mesh_cells);
    const Eigen::Index n = static_cast<Eigen::Index>(op.mesh.size());
    const auto K = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(p.T / scheme.dt)));
    const double dt = p.T / static_cast<double>(K);

    const auto b = caputo_l1_weights(p.alpha, K);
    const double c = std::pow(dt, -p.alpha) * reciprocal_gamma(2.0 - p.alpha);

    Eigen::VectorXd diag = op.diag + (c * b[0]) * op.rho;
    Eigen::VectorXd sub = op.sub, sup = op.sup;
    if (p.chi == 0) {
        diag[0] = 1.0;
        sup[0] = 0.0;
        diag[n - 1] = 1.0;
        sub[n - 1] = 0.0;
    }
    const TriFactor factor(sub, diag, sup);

    // Source evaluation per step.
    const bool separable = p.F.kind() == SourceTerm::Kind::separable;
    const bool general = p.F.kind() == SourceTerm::Kind::general;
    Eigen::VectorXd src_space(n);
    if (separable)
        src_space = nodal_field(p.F.space_factor(), basis, op.mesh);

    FDField out;
    out.mesh = op.mesh;
    out.times.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        out.times[k] = dt * static_cast<double>(k);
    out.times.back() = p.T;
    out.values.resize(static_cast<Eigen::Index>(K) + 1, n);
    out.values.row(0) = nodal_field(p.u0, basis, op.mesh).transpose();

    Eigen::RowVectorXd hist(n);
    Eigen::VectorXd rhs(n);
    for (std::size_t k = 1; k <= K; ++k) {
        const double t = out.times[k];
        // rho c (b_{k-1} u^0 + sum_{j=1}^{k-1} (b_{j-1} - b_j) u^{k-j}): the
        // explicit side of the L1 history, all coefficients nonnegative.
        hist = b[k - 1] * out.values.row(0);
        for (std::size_t j = 1; j < k; ++j)
            hist += (b[j - 1] - b[j]) *
                    out.values.row(static_cast<Eigen::Index>(k - j));
        rhs = (c * hist.transpose().array() * op.rho.array()).matrix();
        if (separable) {
            rhs += p.F.time_factor()(t) * src_space;
        } else if (general) {
            for (Eigen::Index i = 0; i < n; ++i)
                rhs[i] += p.F(t, op.mesh[static_cast<std::size_t>(i)]);
        }
        if (p.chi == 0) {
            rhs[0] = boundary_value(p.f[0], t, p.T);
            rhs[n - 1] = boundary_value(p.f[1], t, p.T);
        } else {
            rhs[0] += op.flux_scale * boundary_value(p.f[0], t, p.T);
            rhs[n - 1] += op.flux_scale * boundary_value(p.f[1], t, p.T);
        }
        factor.solve(rhs);
        out.values.row(static_cast<Eigen::Index>(k)) = rhs.transpose();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Talbot inversion
// ---------------------------------------------------------------------------

FDField fd_solve_talbot(const Problem& p, const SpectralBasis& basis,
                        const FDScheme& scheme,
                        const std::vector<double>& times) {
    validate_problem(p);
    validate_scheme(scheme);
    if (!(p.alpha > 0.0 && p.alpha < 2.0) || p.alpha == 1.0)
        throw std::domain_error(
            "fd oracle: talbot requires alpha in (0,1) or (1,2)");
    if (times.empty())
        throw std::invalid_argument("fd oracle: no evaluation times given");
    for (double t : times)
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::domain_error(
                "fd oracle: talbot evaluation times must be positive");

    const FDOperator op = assemble_fd_operator(p, scheme.mesh_cells);
    const Eigen::Index n = static_cast<Eigen::Index>(op.mesh.size());

    TalbotWorkspace w{p, op,
                      nodal_field(p.u0, basis, op.mesh),
                      Eigen::VectorXd::Zero(n),
                      Eigen::VectorXd::Zero(n),
                      p.F.kind() == SourceTerm::Kind::separable,
                      p.F.kind() == SourceTerm::Kind::general};
    if (p.alpha > 1.0) w.u1n = nodal_field(*p.u1, basis, op.mesh);
    if (w.separable)
        w.src_space = nodal_field(p.F.space_factor(), basis, op.mesh);

    FDField out;
    out.mesh = op.mesh;
    out.times = times;
    out.values.resize(static_cast<Eigen::Index>(times.size()), n);

    detail::parallel_for_index(
        static_cast<int>(times.size()), static_cast<int>(scheme.threads),
        [&](int ti) {
            const double t = times[static_cast<std::size_t>(ti)];
            const int base = static_cast<int>(scheme.talbot_nodes);
            std::ostringstream diag;
            for (int nodes : {base, 2 * base}) {
                Eigen::VectorXd v1 = talbot_rule(w, t, nodes, false);
                Eigen::VectorXd v2 = talbot_rule(w, t, nodes, true);
                if (p.chi == 0) {
                    // The cutoff transform inverts to half the jump at the
                    // pinned rows; the datum there is known exactly.
                    const double left = boundary_value(p.f[0], t, p.T);
                    const double right = boundary_value(p.f[1], t, p.T);
                    v1[0] = v2[0] = left;
                    v1[n - 1] = v2[n - 1] = right;
                }
                const double scale =
                    std::max(v1.cwiseAbs().maxCoeff(),
                             v2.cwiseAbs().maxCoeff());
                const double diff = (v1 - v2).cwiseAbs().maxCoeff();
                const double pole = escaped_pole_bound(p.alpha, nodes);
                const bool finite = v1.allFinite() && v2.allFinite();
                if (finite && pole <= kPoleGate && diff <= kAgreeTol * scale) {
                    out.values.row(ti) = v1.transpose();
                    return;
                }
                diag << (nodes == base ? "" : "; ") << nodes
                     << " nodes: phase discrepancy " << diff << " (scale "
                     << scale << "), escaped-pole bound " << pole
                     << (finite ? "" : ", non-finite values");
            }
            throw ContourFailure(
                "fd oracle: talbot contour failure at t = " +
                format_shortest(t) + " [" + diag.str() + "]");
        });
    return out;
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

void write_field_csv(const FDField& field, std::ostream& out) {
    out << "t,x,value\n";
    for (std::size_t k = 0; k < field.times.size(); ++k)
        for (std::size_t i = 0; i < field.mesh.size(); ++i)
            out << format_shortest(field.times[k]) << ','
                << format_shortest(field.mesh[i]) << ','
                << format_shortest(field.values(
                       static_cast<Eigen::Index>(k),
                       static_cast<Eigen::Index>(i)))
                << '\n';
}

}  // namespace fracspec
