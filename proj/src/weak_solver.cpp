#include <fracspec/weak_solver.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <fracspec/detail/parallel_for.hpp>
#include <fracspec/elliptic_compat.hpp>
#include <fracspec/gamma.hpp>
#include <fracspec/mittag_leffler.hpp>
#include <fracspec/numfmt.hpp>
#include <fracspec/quadrature.hpp>

namespace fracspec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative threshold separating a genuine compatibility defect from the
/// round-off residue of data constructed to be compatible: the defect is a
/// difference of terms of size `scale`, so anything below ~1e3 ulps of that
/// is treated as zero when deciding the signed-infinity rows at t = 0 (the
/// series term itself always uses the defect as computed).
constexpr double kDefectFloor = 1e-12;

// ---------------------------------------------------------------------------
// Kernel moments
// ---------------------------------------------------------------------------

/// Exact kernel moments for one mode: P0(s) = int_0^s k(r) dr and
/// Q(s) = int_0^s P0(r) dr, the two primitives product integration needs
/// for piecewise-linear data. Values are cached by the bit pattern of s, so
/// repeated grid differences cost one hash lookup.
class KernelMoments {
  public:
    KernelMoments(double alpha, double lambda)
        : alpha_(alpha),
          lambda_(lambda),
          ep1_(alpha, alpha + 1.0),
          ep2_(alpha, alpha + 2.0) {}

    // (P0(sigma), Q(sigma))
    std::pair<double, double> at(double sigma) {
        if (!(sigma > 0.0)) return {0.0, 0.0};
        const auto key = std::bit_cast<std::uint64_t>(sigma);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double ta = std::pow(sigma, alpha_);
        const double z = -lambda_ * ta;
        const std::pair<double, double> v{ta * ep1_(z), ta * sigma * ep2_(z)};
        cache_.emplace(key, v);
        return v;
    }

  private:
    double alpha_;
    double lambda_;
    MLEvaluator ep1_;
    MLEvaluator ep2_;
    std::unordered_map<std::uint64_t, std::pair<double, double>> cache_;
};

/// Convolution (k * g)(t_k) for every grid time: the data signal g is
/// piecewise linear on the grid, the kernel integrated exactly. Per segment
/// [s_j, s_{j+1}], with sigma = t - s, h = s_{j+1} - s_j and
/// dQ = Q(sig_hi) - Q(sig_lo):
///
///   contribution = g_j (P0(sig_hi) - dQ/h) + g_{j+1} (dQ/h - P0(sig_lo)).
///
/// Constant data telescope to g * P0(t) exactly, reproducing the closed
/// form (1 - E_{a,1}(-l t^a)) g / l.
Eigen::VectorXd convolve_grid(KernelMoments& km, const std::vector<double>& t,
                              const Eigen::VectorXd& g) {
    const auto K = t.size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    for (std::size_t k = 1; k < K; ++k) {
        double acc = 0.0;
        auto hi = km.at(t[k] - t[0]);
        for (std::size_t j = 0; j + 1 <= k; ++j) {
            const auto lo = km.at(t[k] - t[j + 1]);
            const double h = t[j + 1] - t[j];
            const double dq_over_h = (hi.second - lo.second) / h;
            acc += g[static_cast<Eigen::Index>(j)] * (hi.first - dq_over_h) +
                   g[static_cast<Eigen::Index>(j + 1)] *
                       (dq_over_h - lo.first);
            hi = lo;
        }
        out[static_cast<Eigen::Index>(k)] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Data preparation
// ---------------------------------------------------------------------------

double boundary_sign(int chi) { return chi == 0 ? -1.0 : 1.0; }  // -(-1)^chi

/// True when every boundary signal supports derivatives of the given order
/// (zero signals trivially do).
bool boundary_derivatives_available(const Problem& p) {
    for (const auto& sig : p.f)
        if (!sig.is_zero() && !sig.derivatives_available()) return false;
    return true;
}

bool source_derivatives_available(const Problem& p) {
    return p.F.is_zero() || p.F.derivatives_available();
}

/// Boundary signal samples, one row per component: fvals(e, k) = d^m/dt^m
/// f_e(t_k).
Eigen::MatrixXd boundary_matrix(const Problem& p,
                                const std::vector<double>& grid, int order) {
    const auto E = p.f.size();
    Eigen::MatrixXd fvals(static_cast<Eigen::Index>(E),
                          static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto col = boundary_values(p.f, grid[k], order);
        for (std::size_t e = 0; e < E; ++e)
            fvals(static_cast<Eigen::Index>(e),
                  static_cast<Eigen::Index>(k)) = col[e];
    }
    return fvals;
}

/// Combined modal data signal of derivative order `order`:
///   G(n-1, k) = -(-1)^chi < d^m f(t_k), trace* phi_n > + < rho^{-1} d^m
///   F(t_k), phi_n >.
Eigen::MatrixXd data_matrix(const Problem& p, const SpectralBasis& basis,
                            const std::vector<double>& grid,
                            const Eigen::MatrixXd& fvals, int order) {
    const auto K = static_cast<Eigen::Index>(grid.size());
    const Eigen::Index N = basis.mode_count();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(N, K);

    bool any_boundary = false;
    for (const auto& sig : p.f) any_boundary |= !sig.is_zero();
    if (any_boundary)
        G.noalias() =
            boundary_sign(p.chi) * basis.traces.transpose() * fvals;

    if (!p.F.is_zero()) {
        if (p.F.kind() == SourceTerm::Kind::separable) {
            const Eigen::VectorXd load = field_load(basis, p.F.space_factor());
            Eigen::RowVectorXd tf(K);
            for (Eigen::Index k = 0; k < K; ++k) {
                const double t = grid[static_cast<std::size_t>(k)];
                tf[k] = order == 0
                            ? p.F.time_factor()(t)
                            : signal_derivative(p.F.time_factor(), order, t);
            }
            G.noalias() += load * tf;
        } else {
            for (Eigen::Index k = 0; k < K; ++k)
                G.col(k) += source_coefficients(
                    basis, p.F, grid[static_cast<std::size_t>(k)], order);
        }
    }
    return G;
}

void validate_pair(const Problem& p, const SpectralBasis& basis) {
    if (p.chi != basis.chi)
        throw std::invalid_argument(
            "solver: basis boundary kind does not match the problem");
    if (p.domain.dim != basis.dim)
        throw std::invalid_argument(
            "solver: basis dimension does not match the problem domain");
    if (p.domain.x0 != basis.domain.x0 || p.domain.x1 != basis.domain.x1 ||
        (p.domain.dim == 2 && (p.domain.y0 != basis.domain.y0 ||
                               p.domain.y1 != basis.domain.y1)))
        throw std::invalid_argument(
            "solver: basis domain does not match the problem domain");
    if (p.f.size() != static_cast<std::size_t>(p.domain.boundary_count()))
        throw std::invalid_argument(
            "solver: boundary signal count does not match the domain");
    if (p.alpha > 1.0 && !p.u1.has_value())
        throw std::invalid_argument("solver: u1 required for alpha > 1");
}

void validate_grid(const std::vector<double>& grid, double T) {
    if (grid.empty())
        throw std::invalid_argument("solver: empty time grid");
    if (grid.front() != 0.0)
        throw std::invalid_argument("solver: time grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw std::invalid_argument(
                "solver: time grid must be strictly increasing");
    if (grid.back() > T * (1.0 + 4e-16))
        throw std::invalid_argument(
            "solver: time grid extends beyond the horizon T");
}

using detail::parallel_for_index;

/// Scale against which a defect counts as genuinely nonzero (see
/// kDefectFloor).
bool significant(double defect, double scale) {
    return defect != 0.0 && std::fabs(defect) > kDefectFloor * scale;
}

}  // namespace

// ---------------------------------------------------------------------------
// solve_modes
// ---------------------------------------------------------------------------

ModeSeries solve_modes(const Problem& problem, const SpectralBasis& basis,
                       const std::vector<double>& grid, int threads) {
    validate_pair(problem, basis);
    validate_grid(grid, problem.T);

    const Eigen::Index N = basis.mode_count();
    const auto K = static_cast<Eigen::Index>(grid.size());

    ModeSeries s;
    s.times = grid;
    s.alpha = problem.alpha;
    s.chi = problem.chi;
    s.horizon = problem.T;
    for (const auto& sig : problem.f) s.has_boundary |= !sig.is_zero();
    s.has_source = !problem.F.is_zero();
    s.has_initial = !problem.u0.is_zero();
    s.has_initial_velocity =
        problem.alpha > 1.0 && !problem.u1->is_zero();

    s.boundary_values_on_grid = boundary_matrix(problem, grid, 0);
    const Eigen::MatrixXd G =
        data_matrix(problem, basis, grid, s.boundary_values_on_grid, 0);

    const Eigen::VectorXd u0c =
        s.has_initial ? project(basis, problem.u0)
                      : Eigen::VectorXd::Zero(N).eval();
    const Eigen::VectorXd u1c =
        s.has_initial_velocity ? project(basis, *problem.u1)
                               : Eigen::VectorXd::Zero(N).eval();

    // Order-1 compatibility defects b_n = g_n(0) - lambda_n <u0, phi_n>.
    s.defect_b = G.col(0) - basis.eigenvalues.cwiseProduct(u0c);

    // Order-2 defects e_n = g_n'(0) - lambda_n <u1, phi_n>, available only
    // when the data support first time derivatives.
    if (boundary_derivatives_available(problem) &&
        source_derivatives_available(problem)) {
        const std::vector<double> grid0{0.0};
        const Eigen::MatrixXd f1 = boundary_matrix(problem, grid0, 1);
        const Eigen::MatrixXd G1 =
            data_matrix(problem, basis, grid0, f1, 1);
        s.defect_e = G1.col(0) - basis.eigenvalues.cwiseProduct(u1c);
    }

    const bool has_data = s.has_boundary || s.has_source;
    s.values.resize(N, K);

    parallel_for_index(static_cast<int>(N), threads, [&](int i) {
        const double lambda = basis.eigenvalues[i];
        Eigen::VectorXd row;
        if (has_data) {
            KernelMoments km(problem.alpha, lambda);
            row = convolve_grid(km, grid, G.row(i).transpose());
        } else {
            row = Eigen::VectorXd::Zero(K);
        }
        if (u0c[i] != 0.0 || u1c[i] != 0.0) {
            MLEvaluator e1(problem.alpha, 1.0);
            std::optional<MLEvaluator> e2;
            if (u1c[i] != 0.0) e2.emplace(problem.alpha, 2.0);
            for (Eigen::Index k = 0; k < K; ++k) {
                const double t = grid[static_cast<std::size_t>(k)];
                const double z =
                    t > 0.0 ? -lambda * std::pow(t, problem.alpha) : 0.0;
                if (u0c[i] != 0.0) row[k] += u0c[i] * e1(z);
                if (u1c[i] != 0.0) row[k] += u1c[i] * t * (*e2)(z);
            }
        }
        s.values.row(i) = row.transpose();
    });

    // Truncation-tail indicator: energy fraction of the last 10% of modes,
    // maximized over grid times.
    const Eigen::Index tail = std::max<Eigen::Index>(1, N / 10);
    for (Eigen::Index k = 0; k < K; ++k) {
        const double total = s.values.col(k).squaredNorm();
        if (total <= 0.0) continue;
        s.tail_fraction = std::max(
            s.tail_fraction,
            s.values.col(k).tail(tail).squaredNorm() / total);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Derivative series
// ---------------------------------------------------------------------------

namespace {

void validate_series(const ModeSeries& s, const Problem& p,
                     const SpectralBasis& basis) {
    if (s.mode_count() != basis.mode_count() ||
        s.values.cols() != static_cast<Eigen::Index>(s.times.size()))
        throw std::invalid_argument(
            "derivative series: mode series shape does not match the basis");
    if (s.alpha != p.alpha || s.chi != p.chi)
        throw std::invalid_argument(
            "derivative series: mode series problem parameters do not match");
}

}  // namespace

const Eigen::MatrixXd& first_derivative_modes(ModeSeries& s,
                                              const Problem& problem,
                                              const SpectralBasis& basis,
                                              int threads) {
    validate_pair(problem, basis);
    validate_series(s, problem, basis);
    if (!boundary_derivatives_available(problem) ||
        !source_derivatives_available(problem))
        throw std::invalid_argument(
            "derivative series: data do not support time derivatives");

    const Eigen::Index N = basis.mode_count();
    const auto K = static_cast<Eigen::Index>(s.times.size());
    const double alpha = problem.alpha;

    const Eigen::MatrixXd f1 = boundary_matrix(problem, s.times, 1);
    const Eigen::MatrixXd G1 = data_matrix(problem, basis, s.times, f1, 1);
    const Eigen::VectorXd u1c =
        s.has_initial_velocity ? project(basis, *problem.u1)
                               : Eigen::VectorXd::Zero(N).eval();
    const Eigen::VectorXd u0c =
        s.has_initial ? project(basis, problem.u0)
                      : Eigen::VectorXd::Zero(N).eval();

    Eigen::MatrixXd d1(N, K);
    const bool any_data = G1.cwiseAbs().maxCoeff() > 0.0;

    parallel_for_index(static_cast<int>(N), threads, [&](int i) {
        const double lambda = basis.eigenvalues[i];
        const double b = s.defect_b[i];
        const double scale =
            lambda * std::fabs(u0c[i]) + std::fabs(b + lambda * u0c[i]);

        Eigen::VectorXd row;
        if (any_data) {
            KernelMoments km(alpha, lambda);
            row = convolve_grid(km, s.times, G1.row(i).transpose());
        } else {
            row = Eigen::VectorXd::Zero(K);
        }

        MLEvaluator eaa(alpha, alpha);
        std::optional<MLEvaluator> e1;
        if (alpha > 1.0 && u1c[i] != 0.0) e1.emplace(alpha, 1.0);
        for (Eigen::Index k = 1; k < K; ++k) {
            const double t = s.times[static_cast<std::size_t>(k)];
            const double z = -lambda * std::pow(t, alpha);
            if (b != 0.0) row[k] += b * std::pow(t, alpha - 1.0) * eaa(z);
            if (e1) row[k] += u1c[i] * (*e1)(z);
        }
        // t = 0 row: the b-term behaves like b t^{alpha-1}/Gamma(alpha);
        // singular for alpha < 1, zero for alpha > 1.
        if (alpha < 1.0)
            row[0] = significant(b, scale) ? std::copysign(kInf, b) : 0.0;
        else
            row[0] = u1c[i];
        d1.row(i) = row.transpose();
    });

    s.d1 = std::move(d1);
    return *s.d1;
}

const Eigen::MatrixXd& second_derivative_modes(ModeSeries& s,
                                               const Problem& problem,
                                               const SpectralBasis& basis,
                                               int threads) {
    validate_pair(problem, basis);
    validate_series(s, problem, basis);
    const bool order2_ok =
        boundary_derivatives_available(problem) &&
        source_derivatives_available(problem) && s.defect_e.size() > 0;
    if (!order2_ok)
        throw std::invalid_argument(
            "derivative series: data do not support second time derivatives");

    const Eigen::Index N = basis.mode_count();
    const auto K = static_cast<Eigen::Index>(s.times.size());
    const double alpha = problem.alpha;

    const Eigen::MatrixXd f2 = boundary_matrix(problem, s.times, 2);
    const Eigen::MatrixXd G2 = data_matrix(problem, basis, s.times, f2, 2);
    const Eigen::VectorXd u0c =
        s.has_initial ? project(basis, problem.u0)
                      : Eigen::VectorXd::Zero(N).eval();
    const Eigen::VectorXd u1c =
        s.has_initial_velocity ? project(basis, *problem.u1)
                               : Eigen::VectorXd::Zero(N).eval();

    // Sign of 1/Gamma(alpha-1): positive for alpha in (1,2), negative for
    // alpha in (0,1), which flips the direction of the t^{alpha-2} blow-up.
    const double rg = reciprocal_gamma(alpha - 1.0);

    Eigen::MatrixXd d2(N, K);
    const bool any_data = G2.cwiseAbs().maxCoeff() > 0.0;

    parallel_for_index(static_cast<int>(N), threads, [&](int i) {
        const double lambda = basis.eigenvalues[i];
        const double b = s.defect_b[i];
        const double e = s.defect_e[i];
        const double scale_b =
            lambda * std::fabs(u0c[i]) + std::fabs(b + lambda * u0c[i]);
        const double scale_e =
            lambda * std::fabs(u1c[i]) + std::fabs(e + lambda * u1c[i]);

        Eigen::VectorXd row;
        if (any_data) {
            KernelMoments km(alpha, lambda);
            row = convolve_grid(km, s.times, G2.row(i).transpose());
        } else {
            row = Eigen::VectorXd::Zero(K);
        }

        MLEvaluator eaa(alpha, alpha);
        MLEvaluator eam1(alpha, alpha - 1.0);
        for (Eigen::Index k = 1; k < K; ++k) {
            const double t = s.times[static_cast<std::size_t>(k)];
            const double z = -lambda * std::pow(t, alpha);
            if (b != 0.0) row[k] += b * std::pow(t, alpha - 2.0) * eam1(z);
            if (e != 0.0) row[k] += e * std::pow(t, alpha - 1.0) * eaa(z);
        }
        // t = 0: b t^{alpha-2}/Gamma(alpha-1) dominates when b is genuine;
        // otherwise e t^{alpha-1}/Gamma(alpha) is singular for alpha < 1.
        double at0 = 0.0;
        if (significant(b, scale_b))
            at0 = std::copysign(kInf, b * rg);
        else if (alpha < 1.0 && significant(e, scale_e))
            at0 = std::copysign(kInf, e);
        row[0] = at0;
        d2.row(i) = row.transpose();
    });

    s.d2 = std::move(d2);
    return *s.d2;
}

// ---------------------------------------------------------------------------
// Laplace transform
// ---------------------------------------------------------------------------

namespace {

/// int_0^T e^{-pt} sig(t) dt by adaptive quadrature (1e-11 relative).
/// Sampled signals integrate exactly across their own breakpoints.
double signal_transform(const TimeSignal& sig, double p, double T) {
    if (sig.is_zero()) return 0.0;
    quad::Options opt;
    opt.rel_tol = 1e-11;
    opt.max_depth = 24;
    auto f = [&](double t) { return std::exp(-p * t) * sig(t); };
    if (sig.kind() == TimeSignal::Kind::samples && sig.samples().size() > 1) {
        const auto m = sig.samples().size();
        std::vector<double> brk;
        brk.reserve(m);
        const double h = sig.horizon();
        for (std::size_t j = 0; j < m; ++j) {
            const double t =
                h * static_cast<double>(j) / static_cast<double>(m - 1);
            if (t < T) brk.push_back(t);
        }
        brk.push_back(T);
        return quad::adaptive_gauss_segmented(f, brk, opt).value;
    }
    return quad::adaptive_gauss(f, 0.0, T, opt).value;
}

struct TransformParts {
    double numerator;
    double denominator;
};

TransformParts transform_parts(const Problem& problem,
                               const SpectralBasis& basis, int n, double p) {
    validate_pair(problem, basis);
    if (!(p > 0.0))
        throw std::domain_error("mode_laplace: p must be positive");
    if (n < 1 || n > basis.mode_count())
        throw std::out_of_range("mode_laplace: mode index out of range");
    const double alpha = problem.alpha;
    const double lambda = basis.eigenvalues[n - 1];
    const Eigen::Index idx = n - 1;

    double num = 0.0;
    if (!problem.u0.is_zero())
        num += std::pow(p, alpha - 1.0) * project(basis, problem.u0)[idx];
    if (alpha > 1.0 && !problem.u1->is_zero())
        num += std::pow(p, alpha - 2.0) * project(basis, *problem.u1)[idx];

    // Boundary transform term: -(-1)^chi sum_e Lf_e(p) <trace* phi_n>_e.
    double bsum = 0.0;
    for (std::size_t e = 0; e < problem.f.size(); ++e) {
        if (problem.f[e].is_zero()) continue;
        bsum += signal_transform(problem.f[e], p, problem.T) *
                basis.traces(static_cast<Eigen::Index>(e), idx);
    }
    num += boundary_sign(problem.chi) * bsum;

    if (!problem.F.is_zero()) {
        if (problem.F.kind() == SourceTerm::Kind::separable) {
            num += signal_transform(problem.F.time_factor(), p, problem.T) *
                   field_load(basis, problem.F.space_factor())[idx];
        } else {
            quad::Options opt;
            opt.rel_tol = 1e-11;
            opt.max_depth = 24;
            auto f = [&](double t) {
                return std::exp(-p * t) *
                       source_coefficients(basis, problem.F, t)[idx];
            };
            num += quad::adaptive_gauss(f, 0.0, problem.T, opt).value;
        }
    }
    return {num, std::pow(p, alpha) + lambda};
}

}  // namespace

double mode_laplace(const Problem& problem, const SpectralBasis& basis, int n,
                    double p) {
    const auto parts = transform_parts(problem, basis, n, p);
    return parts.numerator / parts.denominator;
}

// ---------------------------------------------------------------------------
// ModeEvaluator
// ---------------------------------------------------------------------------

struct ModeEvaluator::Impl {
    double alpha;
    double lambda;
    double u0c = 0.0;
    double u1c = 0.0;
    std::vector<double> grid;  // data nodes on [0, T]
    Eigen::VectorXd g;         // data signal at the nodes
    bool has_data = false;
    mutable MLEvaluator e1;
    mutable std::optional<MLEvaluator> e2;
    mutable MLEvaluator ep1;
    mutable MLEvaluator ep2;

    Impl(double a, double l)
        : alpha(a), lambda(l), e1(a, 1.0), ep1(a, a + 1.0), ep2(a, a + 2.0) {}

    std::pair<double, double> moments(double sigma) const {
        if (!(sigma > 0.0)) return {0.0, 0.0};
        const double ta = std::pow(sigma, alpha);
        const double z = -lambda * ta;
        return {ta * ep1(z), ta * sigma * ep2(z)};
    }
};

ModeEvaluator::ModeEvaluator(const Problem& problem,
                             const SpectralBasis& basis, int n,
                             std::vector<double> data_grid) {
    validate_pair(problem, basis);
    validate_grid(data_grid, problem.T);
    if (data_grid.back() != problem.T)
        throw std::invalid_argument(
            "mode evaluator: data grid must end exactly at T");
    if (n < 1 || n > basis.mode_count())
        throw std::out_of_range("mode evaluator: mode index out of range");

    impl_ = std::make_unique<Impl>(problem.alpha,
                                   basis.eigenvalues[n - 1]);
    if (!problem.u0.is_zero())
        impl_->u0c = project(basis, problem.u0)[n - 1];
    if (problem.alpha > 1.0) {
        impl_->e2.emplace(problem.alpha, 2.0);
        if (!problem.u1->is_zero())
            impl_->u1c = project(basis, *problem.u1)[n - 1];
    }
    const Eigen::MatrixXd fvals = boundary_matrix(problem, data_grid, 0);
    const Eigen::MatrixXd G =
        data_matrix(problem, basis, data_grid, fvals, 0);
    impl_->g = G.row(n - 1).transpose();
    impl_->has_data = impl_->g.cwiseAbs().maxCoeff() > 0.0;
    impl_->grid = std::move(data_grid);
}

ModeEvaluator::ModeEvaluator(ModeEvaluator&&) noexcept = default;
ModeEvaluator::~ModeEvaluator() = default;

double ModeEvaluator::value(double t) const {
    if (!(t >= 0.0))
        throw std::domain_error("mode evaluator: t must be >= 0");
    const Impl& im = *impl_;
    if (t == 0.0) return im.u0c;

    double acc = 0.0;
    if (im.has_data) {
        // Product integration over the data segments below min(t, T); the
        // final segment may be clipped at t.
        auto hi = im.moments(t - im.grid[0]);
        for (std::size_t j = 0; j + 1 < im.grid.size(); ++j) {
            if (im.grid[j] >= t) break;
            const double s_hi = std::min(im.grid[j + 1], t);
            const auto lo = im.moments(t - s_hi);
            const double h = im.grid[j + 1] - im.grid[j];
            const double slope = (im.g[static_cast<Eigen::Index>(j + 1)] -
                                  im.g[static_cast<Eigen::Index>(j)]) /
                                 h;
            const double c0 = im.g[static_cast<Eigen::Index>(j)] +
                              slope * (t - im.grid[j]);
            const double d0 = hi.first - lo.first;
            const double d1 = (t - im.grid[j]) * hi.first -
                              (t - s_hi) * lo.first -
                              (hi.second - lo.second);
            acc += c0 * d0 - slope * d1;
            hi = lo;
        }
    }
    const double z = -im.lambda * std::pow(t, im.alpha);
    if (im.u0c != 0.0) acc += im.u0c * im.e1(z);
    if (im.u1c != 0.0) acc += im.u1c * t * (*im.e2)(z);
    return acc;
}

// ---------------------------------------------------------------------------
// Field evaluation
// ---------------------------------------------------------------------------

Eigen::MatrixXd evaluate_solution(const ModeSeries& series,
                                  const SpectralBasis& basis,
                                  const std::vector<double>& xs) {
    if (basis.dim != 1)
        throw std::invalid_argument(
            "evaluate_solution: rectangle domains use "
            "evaluate_solution_mesh");
    if (series.mode_count() != basis.mode_count())
        throw std::invalid_argument(
            "evaluate_solution: series does not match the basis");
    const Eigen::Index N = basis.mode_count();
    const auto M = static_cast<Eigen::Index>(xs.size());
    const double x0 = basis.domain.x0, x1 = basis.domain.x1;
    const double L = x1 - x0;
    const auto cells = static_cast<Eigen::Index>(basis.mesh_x.size()) - 1;

    // Mode values at the query points by linear interpolation of the nodal
    // eigenvectors.
    Eigen::MatrixXd phi(M, N);
    Eigen::MatrixXd lift(M, 2);
    for (Eigen::Index m = 0; m < M; ++m) {
        const double x = xs[static_cast<std::size_t>(m)];
        if (!(x >= x0 && x <= x1))
            throw std::domain_error(
                "evaluate_solution: query point outside the domain");
        const double pos = (x - x0) / L * static_cast<double>(cells);
        const auto cell = std::min<Eigen::Index>(
            cells - 1,
            static_cast<Eigen::Index>(std::max(0.0, std::floor(pos))));
        const double w = pos - static_cast<double>(cell);
        phi.row(m) = (1.0 - w) * basis.modes_1d.row(cell) +
                     w * basis.modes_1d.row(cell + 1);
        lift(m, 0) = lift_component(basis, 0, x);
        lift(m, 1) = lift_component(basis, 1, x);
    }

    if (!series.has_boundary) return (phi * series.values).transpose();

    // Resum around the boundary lift: u = y_t + sum (u_n - <y_t, phi_n>)
    // phi_n with y_t = f_l(t) Y_0 + f_r(t) Y_1.
    const Eigen::VectorXd pl =
        project(basis, lift_values(basis, {1.0, 0.0}));
    const Eigen::VectorXd pr =
        project(basis, lift_values(basis, {0.0, 1.0}));
    Eigen::MatrixXd coeff = series.values;
    coeff.noalias() -= pl * series.boundary_values_on_grid.row(0);
    coeff.noalias() -= pr * series.boundary_values_on_grid.row(1);
    Eigen::MatrixXd out = (phi * coeff).transpose();
    out.noalias() +=
        (lift * series.boundary_values_on_grid).transpose();
    return out;
}

Eigen::MatrixXd evaluate_solution_mesh(const ModeSeries& series,
                                       const SpectralBasis& basis) {
    if (basis.dim == 1)
        return evaluate_solution(series, basis, basis.mesh_x);
    if (series.mode_count() != basis.mode_count())
        throw std::invalid_argument(
            "evaluate_solution: series does not match the basis");
    const auto K = static_cast<Eigen::Index>(series.times.size());
    const auto nodes = static_cast<Eigen::Index>(basis.mesh_x.size() *
                                                 basis.mesh_y.size());
    Eigen::MatrixXd out(K, nodes);
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto field = synthesize(basis, series.values.col(k));
        out.row(k) = Eigen::Map<const Eigen::RowVectorXd>(
            field.data(), static_cast<Eigen::Index>(field.size()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

void write_mode_series_csv(const ModeSeries& series, std::ostream& out,
                           int block) {
    const Eigen::MatrixXd* data = &series.values;
    if (block == 1) {
        if (!series.d1)
            throw std::invalid_argument(
                "mode series csv: first-derivative block not computed");
        data = &*series.d1;
    } else if (block == 2) {
        if (!series.d2)
            throw std::invalid_argument(
                "mode series csv: second-derivative block not computed");
        data = &*series.d2;
    } else if (block != 0) {
        throw std::invalid_argument("mode series csv: block must be 0, 1 or 2");
    }

    const Eigen::Index N = series.mode_count();
    out << "# alpha=" << format_shortest(series.alpha)
        << " chi=" << series.chi << " N=" << N
        << " T=" << format_shortest(series.horizon)
        << " grid=" << series.times.size() << "pts[0,"
        << format_shortest(series.times.back()) << "]\n";
    out << "t";
    for (Eigen::Index n = 1; n <= N; ++n) out << ",u_" << n;
    out << "\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        out << format_shortest(series.times[k]);
        for (Eigen::Index n = 0; n < N; ++n)
            out << ','
                << format_shortest((*data)(n, static_cast<Eigen::Index>(k)));
        out << "\n";
    }
}

}  // namespace fracspec
