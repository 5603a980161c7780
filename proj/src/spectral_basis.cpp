#include <fracspec/numfmt.hpp>
#include <fracspec/spectral_basis.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <fracspec/quadrature.hpp>

namespace fracspec {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPivotFloor = 1e-290;

// --------------------------------------------------------------------------
// Symmetric tridiagonal pencil utilities
// --------------------------------------------------------------------------

struct Tridiag {
    Eigen::VectorXd d;  // main diagonal, size n
    Eigen::VectorXd e;  // first off-diagonal, size n-1
};

Eigen::VectorXd tri_mul(const Tridiag& A, const Eigen::VectorXd& x) {
    const auto n = x.size();
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = A.d[i] * x[i];
        if (i > 0) v += A.e[i - 1] * x[i - 1];
        if (i + 1 < n) v += A.e[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

/// Number of pencil eigenvalues (K - lambda M) below `lambda`, by the inertia
/// of the LDL^T factorization (Sturm count).
int sturm_count(const Tridiag& K, const Tridiag& M, double lambda) {
    const auto n = K.d.size();
    int count = 0;
    double prev = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double a = K.d[i] - lambda * M.d[i];
        if (i > 0) {
            const double b = K.e[i - 1] - lambda * M.e[i - 1];
            a -= b * b / prev;
        }
        if (std::fabs(a) < kPivotFloor) a = -kPivotFloor;
        if (a < 0.0) ++count;
        prev = a;
    }
    return count;
}

/// n-th (1-based) generalized eigenvalue by bisection on the Sturm count.
double bisect_eigenvalue(const Tridiag& K, const Tridiag& M, int n, double hi0) {
    double lo = 0.0;
    double hi = hi0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::fabs(hi)))
            break;
        if (sturm_count(K, M, mid) >= n)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// LU factorization of the tridiagonal K - sigma*M with partial pivoting
/// (row interchanges produce a second superdiagonal).
struct TriLU {
    Eigen::VectorXd u0, u1, u2;  // diag, first and second superdiagonal
    Eigen::VectorXd l;           // multipliers
    std::vector<char> piv;       // interchange flags
};

TriLU tri_factor(const Tridiag& K, const Tridiag& M, double sigma) {
    const auto n = K.d.size();
    TriLU F;
    F.u0 = K.d - sigma * M.d;
    F.u1 = K.e - sigma * M.e;
    F.u2 = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
    F.l = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
    F.piv.assign(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 0)), 0);
    Eigen::VectorXd low = F.u1;  // subdiagonal (symmetric pencil)

    // Pivots below rounding noise are floored at noise level, not at a
    // denormal, so the solve cannot overflow when sigma is (numerically)
    // an exact eigenvalue.
    double scale = F.u0.cwiseAbs().maxCoeff();
    if (n > 1) scale = std::max(scale, F.u1.cwiseAbs().maxCoeff());
    const double floor =
        std::max(scale * std::numeric_limits<double>::epsilon(), kPivotFloor);

    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double below = low[i];
        if (std::fabs(F.u0[i]) >= std::fabs(below)) {
            if (std::fabs(F.u0[i]) < floor) F.u0[i] = floor;
            const double li = below / F.u0[i];
            F.l[i] = li;
            F.u0[i + 1] -= li * F.u1[i];
            if (i + 2 < n) F.u1[i + 1] -= li * F.u2[i];
        } else {
            F.piv[static_cast<std::size_t>(i)] = 1;
            const double t0 = F.u0[i];
            const double t1 = F.u1[i];
            F.u0[i] = below;
            F.u1[i] = F.u0[i + 1];
            if (i + 2 < n) F.u2[i] = F.u1[i + 1];
            const double li = t0 / F.u0[i];
            F.l[i] = li;
            F.u0[i + 1] = t1 - li * F.u1[i];
            if (i + 2 < n) F.u1[i + 1] = -li * F.u2[i];
        }
    }
    if (std::fabs(F.u0[n - 1]) < floor) F.u0[n - 1] = floor;
    return F;
}

Eigen::VectorXd tri_solve(const TriLU& F, Eigen::VectorXd b) {
    const auto n = b.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (F.piv[static_cast<std::size_t>(i)]) std::swap(b[i], b[i + 1]);
        b[i + 1] -= F.l[i] * b[i];
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double v = b[i];
        if (i + 1 < n) v -= F.u1[i] * x[i + 1];
        if (i + 2 < n) v -= F.u2[i] * x[i + 2];
        x[i] = v / F.u0[i];
    }
    return x;
}

// --------------------------------------------------------------------------
// 1-D finite-element assembly
// --------------------------------------------------------------------------

struct Assembly {
    Tridiag K;  // stiffness (a) + potential (q) over all nodes
    Tridiag M;  // rho-weighted consistent mass over all nodes
    std::vector<double> nodes;
};

Assembly assemble_1d(const Domain& dom, const Coefficients& coeffs, int elements) {
    const double L = dom.length_x();
    const double h = L / static_cast<double>(elements);
    const int nn = elements + 1;

    Assembly A;
    A.K.d = Eigen::VectorXd::Zero(nn);
    A.K.e = Eigen::VectorXd::Zero(nn - 1);
    A.M.d = Eigen::VectorXd::Zero(nn);
    A.M.e = Eigen::VectorXd::Zero(nn - 1);
    A.nodes.resize(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i)
        A.nodes[static_cast<std::size_t>(i)] =
            dom.x0 + L * static_cast<double>(i) / static_cast<double>(elements);

    const double half = 0.5 * h;
    const double off = half / std::sqrt(3.0);  // 2-point Gauss offsets
    for (int e = 0; e < elements; ++e) {
        const double mid = dom.x0 + h * (static_cast<double>(e) + 0.5);
        const double g[2] = {mid - off, mid + off};
        const double w = half;  // per Gauss point
        double k00 = 0, k01 = 0, k11 = 0;
        double m00 = 0, m01 = 0, m11 = 0;
        for (const double x : g) {
            const double av = coeffs.a(EvalPoint{0.0, x, 0.0});
            const double qv = coeffs.q(EvalPoint{0.0, x, 0.0});
            const double rv = coeffs.rho(EvalPoint{0.0, x, 0.0});
            const double pl = (A.nodes[static_cast<std::size_t>(e) + 1] - x) / h;
            const double pr = 1.0 - pl;
            const double s = av / (h * h);
            k00 += w * (s + qv * pl * pl);
            k01 += w * (-s + qv * pl * pr);
            k11 += w * (s + qv * pr * pr);
            m00 += w * rv * pl * pl;
            m01 += w * rv * pl * pr;
            m11 += w * rv * pr * pr;
        }
        A.K.d[e] += k00;
        A.K.d[e + 1] += k11;
        A.K.e[e] += k01;
        A.M.d[e] += m00;
        A.M.d[e + 1] += m11;
        A.M.e[e] += m01;
    }
    return A;
}

Tridiag restrict_rows(const Tridiag& T, Eigen::Index lo, Eigen::Index count) {
    Tridiag R;
    R.d = T.d.segment(lo, count);
    R.e = count > 1 ? T.e.segment(lo, count - 1) : Eigen::VectorXd{};
    return R;
}

/// Rigorous upper bound on the pencil spectrum:
/// lambda_max(K,M) <= lambda_max(K) / lambda_min(M) via Gershgorin.
double spectrum_bound(const Tridiag& K, const Tridiag& M) {
    const auto n = K.d.size();
    double kmax = 0.0;
    double mmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        double krow = std::fabs(K.d[i]);
        double moff = 0.0;
        if (i > 0) {
            krow += std::fabs(K.e[i - 1]);
            moff += std::fabs(M.e[i - 1]);
        }
        if (i + 1 < n) {
            krow += std::fabs(K.e[i]);
            moff += std::fabs(M.e[i]);
        }
        kmax = std::max(kmax, krow);
        mmin = std::min(mmin, M.d[i] - moff);
    }
    if (!(mmin > 0.0))
        throw std::logic_error("spectral basis: mass matrix lost diagonal dominance");
    return 1.0001 * kmax / mmin + 1.0;
}

// --------------------------------------------------------------------------
// 1-D build
// --------------------------------------------------------------------------

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::fabs(v[i]) > 1e-13 * scale) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

SpectralBasis build_1d(const Domain& dom, const Coefficients& coeffs, int chi,
                       int N, int mesh_size) {
    Assembly A = assemble_1d(dom, coeffs, mesh_size);
    const int nn = mesh_size + 1;

    const Eigen::Index lo = chi == 0 ? 1 : 0;
    const Eigen::Index ndof = chi == 0 ? nn - 2 : nn;
    const Tridiag K = restrict_rows(A.K, lo, ndof);
    const Tridiag M = restrict_rows(A.M, lo, ndof);
    const double hi0 = spectrum_bound(K, M);

    SpectralBasis basis;
    basis.chi = chi;
    basis.dim = 1;
    basis.domain = dom;
    basis.coeffs = coeffs;
    basis.mesh_x = A.nodes;
    basis.eigenvalues.resize(N);
    basis.modes_1d = Eigen::MatrixXd::Zero(nn, N);
    basis.mass_diag = A.M.d;
    basis.mass_off = A.M.e;
    basis.traces = Eigen::MatrixXd::Zero(2, N);

    const double h = dom.length_x() / static_cast<double>(mesh_size);
    Eigen::VectorXd start(ndof);
    for (Eigen::Index i = 0; i < ndof; ++i)
        start[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * static_cast<double>(i));

    int cluster_begin = 0;
    for (int n = 1; n <= N; ++n) {
        const double lambda = bisect_eigenvalue(K, M, n, hi0);
        // Track clusters of near-equal eigenvalues; orthogonalize within.
        if (n >= 2 &&
            lambda - basis.eigenvalues[n - 2] >
                1e-7 * std::max(1.0, std::fabs(lambda)))
            cluster_begin = n - 1;

        // Shift slightly off the bisection value so the factorization keeps a
        // usable pivot even when the estimate is exact to the last bit.
        const double sigma =
            lambda * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
        const TriLU F = tri_factor(K, M, sigma);
        Eigen::VectorXd x = start;
        x /= std::sqrt(x.dot(tri_mul(M, x)));
        for (int iter = 0; iter < 4; ++iter) {
            Eigen::VectorXd y = tri_solve(F, tri_mul(M, x));
            // Pre-scale: the solve can return ~1/eps-sized vectors whose
            // M-norm would overflow.
            const double big = y.cwiseAbs().maxCoeff();
            if (!(big > 0.0) || !std::isfinite(big)) break;
            y /= big;
            for (int j = cluster_begin; j < n - 1; ++j) {
                const Eigen::VectorXd prev =
                    basis.modes_1d.col(j).segment(lo, ndof);
                y -= prev.dot(tri_mul(M, y)) * prev;
            }
            const double norm = std::sqrt(y.dot(tri_mul(M, y)));
            if (!(norm > 0.0)) break;
            x = y / norm;
        }
        basis.eigenvalues[n - 1] = x.dot(tri_mul(K, x));  // Rayleigh polish
        basis.modes_1d.col(n - 1).segment(lo, ndof) = x;
        fix_sign(basis.modes_1d.col(n - 1));

        // Boundary traces.
        const auto& v = basis.modes_1d.col(n - 1);
        if (chi == 0) {
            // Conormal derivative a * dphi/dnu, second-order one-sided
            // differences; outward normal is -1 at the left endpoint.
            const double dl = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            const double dr =
                (3.0 * v[nn - 1] - 4.0 * v[nn - 2] + v[nn - 3]) / (2.0 * h);
            basis.traces(0, n - 1) =
                -coeffs.a(EvalPoint{0.0, dom.x0, 0.0}) * dl;
            basis.traces(1, n - 1) =
                coeffs.a(EvalPoint{0.0, dom.x1, 0.0}) * dr;
        } else {
            basis.traces(0, n - 1) = v[0];
            basis.traces(1, n - 1) = v[nn - 1];
        }
    }
    return basis;
}

// --------------------------------------------------------------------------
// 2-D rectangle: tensor product of closed-form 1-D modes
// --------------------------------------------------------------------------

struct AxisMode {
    int index;      // 0-based for Neumann (constant mode), 1-based for Dirichlet
    double kappa;   // -d^2/dx^2 eigenvalue contribution (j pi / L)^2
};

double axis_mode_value(int chi, int j, double L, double s) {
    // s is the offset from the left endpoint, in [0, L]; L^2-normalized on
    // the axis (the rho normalization is applied once per tensor mode).
    if (chi == 0) return std::sqrt(2.0 / L) * std::sin(j * kPi * s / L);
    if (j == 0) return std::sqrt(1.0 / L);
    return std::sqrt(2.0 / L) * std::cos(j * kPi * s / L);
}

double axis_mode_derivative(int chi, int j, double L, double s) {
    const double k = j * kPi / L;
    if (chi == 0) return std::sqrt(2.0 / L) * k * std::cos(k * s);
    if (j == 0) return 0.0;
    return -std::sqrt(2.0 / L) * k * std::sin(k * s);
}

SpectralBasis build_tensor(const Domain& dom, const Coefficients& coeffs,
                           int chi, int N, int mesh_size) {
    if (!coeffs.all_constant())
        throw std::invalid_argument(
            "spectral basis: rectangle domains require constant coefficients");
    const double rho = coeffs.rho.constant_value();
    const double a = coeffs.a.constant_value();
    const double q = coeffs.q.constant_value();
    const double Lx = dom.length_x();
    const double Ly = dom.length_y();

    // Candidate tensor modes; N per axis suffices for the N smallest pairs.
    const int j0 = chi == 0 ? 1 : 0;
    const int jmax = N + j0;
    struct Candidate {
        double lambda;
        int jx, jy;
    };
    std::vector<Candidate> cand;
    for (int jx = j0; jx < jmax; ++jx)
        for (int jy = j0; jy < jmax; ++jy) {
            const double kx = jx * kPi / Lx;
            const double ky = jy * kPi / Ly;
            cand.push_back({(a * (kx * kx + ky * ky) + q) / rho, jx, jy});
        }
    std::sort(cand.begin(), cand.end(), [](const Candidate& u, const Candidate& v) {
        return std::tie(u.lambda, u.jx, u.jy) < std::tie(v.lambda, v.jx, v.jy);
    });

    SpectralBasis basis;
    basis.chi = chi;
    basis.dim = 2;
    basis.domain = dom;
    basis.coeffs = coeffs;
    basis.eigenvalues.resize(N);
    basis.tensor_index.resize(static_cast<std::size_t>(N));

    const int mx = mesh_size, my = mesh_size;
    basis.mesh_x.resize(static_cast<std::size_t>(mx + 1));
    basis.mesh_y.resize(static_cast<std::size_t>(my + 1));
    for (int i = 0; i <= mx; ++i)
        basis.mesh_x[static_cast<std::size_t>(i)] =
            dom.x0 + Lx * static_cast<double>(i) / mx;
    for (int i = 0; i <= my; ++i)
        basis.mesh_y[static_cast<std::size_t>(i)] =
            dom.y0 + Ly * static_cast<double>(i) / my;

    // Distinct factor indices actually used.
    const int Jx = jmax;  // store factors for indices j0..jmax-1 as columns 0..
    basis.factor_x.resize(mx + 1, Jx - j0);
    basis.factor_y.resize(my + 1, Jx - j0);
    const double rho_root = std::sqrt(rho);
    for (int j = j0; j < jmax; ++j) {
        for (int i = 0; i <= mx; ++i)
            basis.factor_x(i, j - j0) =
                axis_mode_value(chi, j, Lx, basis.mesh_x[static_cast<std::size_t>(i)] - dom.x0) /
                rho_root;  // rho normalization carried by the x factor
        for (int i = 0; i <= my; ++i)
            basis.factor_y(i, j - j0) =
                axis_mode_value(chi, j, Ly, basis.mesh_y[static_cast<std::size_t>(i)] - dom.y0);
    }

    basis.traces = Eigen::MatrixXd::Zero(4, N);
    basis.edge_traces.resize(static_cast<std::size_t>(N));

    for (int n = 1; n <= N; ++n) {
        const Candidate& c = cand[static_cast<std::size_t>(n - 1)];
        basis.eigenvalues[n - 1] = c.lambda;
        basis.tensor_index[static_cast<std::size_t>(n - 1)] = {c.jx - j0, c.jy - j0};

        const int points = 4 * n;
        const auto& [gs, gw] = quad::gauss_legendre(points);

        // Trace of the tensor mode along each edge as a function of the edge
        // coordinate. chi = 0: outward conormal a * dphi/dnu; chi = 1: value.
        auto edge_fn = [&](int edge, double s) -> double {
            const double sx = s - dom.x0;  // bottom/top parameterized by x
            const double sy = s - dom.y0;  // left/right parameterized by y
            switch (edge) {
                case 0:  // x = x0
                    return (chi == 0 ? -a * axis_mode_derivative(0, c.jx, Lx, 0.0)
                                     : axis_mode_value(1, c.jx, Lx, 0.0)) *
                           axis_mode_value(chi, c.jy, Ly, sy) / rho_root;
                case 1:  // x = x1
                    return (chi == 0 ? a * axis_mode_derivative(0, c.jx, Lx, Lx)
                                     : axis_mode_value(1, c.jx, Lx, Lx)) *
                           axis_mode_value(chi, c.jy, Ly, sy) / rho_root;
                case 2:  // y = y0
                    return (chi == 0 ? -a * axis_mode_derivative(0, c.jy, Ly, 0.0)
                                     : axis_mode_value(1, c.jy, Ly, 0.0)) *
                           axis_mode_value(chi, c.jx, Lx, sx) / rho_root;
                default:  // y = y1
                    return (chi == 0 ? a * axis_mode_derivative(0, c.jy, Ly, Ly)
                                     : axis_mode_value(1, c.jy, Ly, Ly)) *
                           axis_mode_value(chi, c.jx, Lx, sx) / rho_root;
            }
        };
        for (int edge = 0; edge < 4; ++edge) {
            const double lo = edge < 2 ? dom.y0 : dom.x0;
            const double hi = edge < 2 ? dom.y1 : dom.x1;
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            auto& tr = basis.edge_traces[static_cast<std::size_t>(n - 1)]
                                        [static_cast<std::size_t>(edge)];
            tr.s.resize(static_cast<std::size_t>(points));
            tr.w.resize(static_cast<std::size_t>(points));
            tr.v.resize(static_cast<std::size_t>(points));
            double integral = 0.0;
            for (int g = 0; g < points; ++g) {
                const double s = mid + half * gs[static_cast<std::size_t>(g)];
                const double w = half * gw[static_cast<std::size_t>(g)];
                const double v = edge_fn(edge, s);
                tr.s[static_cast<std::size_t>(g)] = s;
                tr.w[static_cast<std::size_t>(g)] = w;
                tr.v[static_cast<std::size_t>(g)] = v;
                integral += w * v;
            }
            basis.traces(edge, n - 1) = integral;
        }
    }
    return basis;
}

}  // namespace

// --------------------------------------------------------------------------
// Public operations
// --------------------------------------------------------------------------

SpectralBasis build_basis(const Domain& domain, const Coefficients& coeffs,
                          int chi, int N, int mesh_size) {
    if (chi != 0 && chi != 1)
        throw std::invalid_argument("spectral basis: chi must be 0 or 1");
    if (N < 1) throw std::invalid_argument("spectral basis: N must be >= 1");
    if (mesh_size < 10 * N)
        throw std::invalid_argument(
            "spectral basis: mesh too coarse (mesh_size must be >= 10*N)");
    Coefficients validated = coeffs;
    auto errs = validate_coefficients(domain, validated);
    if (!errs.empty()) {
        std::string msg = "spectral basis: coefficient invariants violated:";
        for (const auto& m : errs) msg += "\n  " + m;
        throw std::invalid_argument(msg);
    }
    if (domain.dim == 1) return build_1d(domain, validated, chi, N, mesh_size);
    if (domain.dim == 2) return build_tensor(domain, validated, chi, N, mesh_size);
    throw std::invalid_argument("spectral basis: domain dim must be 1 or 2");
}

double trace_pairing(const SpectralBasis& basis, int n,
                     const std::vector<double>& h) {
    if (n < 1 || n > basis.mode_count())
        throw std::out_of_range("trace pairing: mode index out of range");
    const auto components = static_cast<std::size_t>(basis.traces.rows());
    if (h.size() != components)
        throw std::invalid_argument(
            "trace pairing: boundary datum needs one value per boundary component");
    double sum = 0.0;
    for (std::size_t e = 0; e < components; ++e)
        sum += h[e] * basis.traces(static_cast<Eigen::Index>(e), n - 1);
    return sum;
}

double trace_pairing(const SpectralBasis& basis, int n,
                     const std::vector<std::function<double(double)>>& h) {
    if (basis.dim != 2)
        throw std::invalid_argument(
            "trace pairing: per-edge functions require a rectangle basis");
    if (n < 1 || n > basis.mode_count())
        throw std::out_of_range("trace pairing: mode index out of range");
    if (h.size() != 4)
        throw std::invalid_argument("trace pairing: four edge functions required");
    double sum = 0.0;
    const auto& edges = basis.edge_traces[static_cast<std::size_t>(n - 1)];
    for (int e = 0; e < 4; ++e) {
        const auto& tr = edges[static_cast<std::size_t>(e)];
        for (std::size_t g = 0; g < tr.s.size(); ++g)
            sum += tr.w[g] * tr.v[g] * h[static_cast<std::size_t>(e)](tr.s[g]);
    }
    return sum;
}

Eigen::VectorXd project(const SpectralBasis& basis,
                        const std::vector<double>& nodal) {
    const int N = basis.mode_count();
    if (basis.dim == 1) {
        if (nodal.size() != basis.mesh_x.size())
            throw std::invalid_argument(
                "project: nodal data does not match the basis mesh");
        const auto n = static_cast<Eigen::Index>(nodal.size());
        Eigen::Map<const Eigen::VectorXd> g(nodal.data(), n);
        Eigen::VectorXd Mg(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double v = basis.mass_diag[i] * g[i];
            if (i > 0) v += basis.mass_off[i - 1] * g[i - 1];
            if (i + 1 < n) v += basis.mass_off[i] * g[i + 1];
            Mg[i] = v;
        }
        return basis.modes_1d.transpose() * Mg;
    }

    // Rectangle: tensorized trapezoid quadrature with constant rho.
    const auto nx = static_cast<Eigen::Index>(basis.mesh_x.size());
    const auto ny = static_cast<Eigen::Index>(basis.mesh_y.size());
    if (static_cast<Eigen::Index>(nodal.size()) != nx * ny)
        throw std::invalid_argument(
            "project: nodal data does not match the tensor mesh");
    const double hx = basis.mesh_x[1] - basis.mesh_x[0];
    const double hy = basis.mesh_y[1] - basis.mesh_y[0];
    Eigen::VectorXd wx = Eigen::VectorXd::Constant(nx, hx);
    Eigen::VectorXd wy = Eigen::VectorXd::Constant(ny, hy);
    wx[0] *= 0.5;
    wx[nx - 1] *= 0.5;
    wy[0] *= 0.5;
    wy[ny - 1] *= 0.5;

    // nodal is x-major: entry(ix, iy) at index ix*ny + iy.
    Eigen::Map<const Eigen::MatrixXd> G(nodal.data(), ny, nx);
    const double rho = basis.coeffs.rho.constant_value();
    // S(ix, k) = sum_iy wy G(iy, ix) Y(iy, k)
    Eigen::MatrixXd S = G.transpose() * wy.asDiagonal() * basis.factor_y;
    Eigen::VectorXd out(N);
    for (int n = 0; n < N; ++n) {
        const auto [jx, jy] = basis.tensor_index[static_cast<std::size_t>(n)];
        out[n] = rho * (wx.cwiseProduct(basis.factor_x.col(jx))).dot(S.col(jy));
    }
    return out;
}

Eigen::VectorXd project(const SpectralBasis& basis, const SpatialField& g) {
    const int N = basis.mode_count();
    if (g.kind() == SpatialField::Kind::modal) {
        const auto& m = g.modes();
        Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
        for (int n = 0; n < N && n < static_cast<int>(m.size()); ++n)
            out[n] = m[static_cast<std::size_t>(n)];
        return out;
    }
    if (basis.dim == 1) return project(basis, g.on_mesh(basis.mesh_x));

    if (g.kind() != SpatialField::Kind::closed_form)
        throw std::invalid_argument(
            "project: rectangle bases accept closed-form or modal fields only");
    const auto nx = basis.mesh_x.size();
    const auto ny = basis.mesh_y.size();
    std::vector<double> nodal(nx * ny);
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            nodal[ix * ny + iy] = g(basis.mesh_x[ix], basis.mesh_y[iy]);
    return project(basis, nodal);
}

std::vector<double> synthesize(const SpectralBasis& basis,
                               const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != basis.eigenvalues.size())
        throw std::invalid_argument(
            "synthesize: one coefficient per mode required");
    if (basis.dim == 1) {
        const Eigen::VectorXd v = basis.modes_1d * coeffs;
        return std::vector<double>(v.data(), v.data() + v.size());
    }
    const auto nx = static_cast<Eigen::Index>(basis.mesh_x.size());
    const auto ny = static_cast<Eigen::Index>(basis.mesh_y.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ny, nx);
    for (int n = 0; n < basis.mode_count(); ++n) {
        const auto [jx, jy] = basis.tensor_index[static_cast<std::size_t>(n)];
        acc.noalias() +=
            coeffs[n] * basis.factor_y.col(jy) * basis.factor_x.col(jx).transpose();
    }
    // Column-major (ny x nx) storage coincides with the x-major node order.
    return std::vector<double>(acc.data(), acc.data() + acc.size());
}

double fractional_norm(const Eigen::VectorXd& coeffs,
                       const Eigen::VectorXd& eigenvalues, double s) {
    if (coeffs.size() != eigenvalues.size())
        throw std::invalid_argument(
            "fractional norm: coefficient and eigenvalue counts differ");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        sum += coeffs[i] * coeffs[i] * std::pow(eigenvalues[i], 2.0 * s);
    return std::sqrt(sum);
}

std::vector<double> lemma_l1_diagnostic(const SpectralBasis& basis,
                                        const std::vector<double>& h,
                                        double theta) {
    if (theta < 0.5)
        throw std::invalid_argument("lemma diagnostic: theta must be >= 1/2");
    const int N = basis.mode_count();
    const double kappa = (2.0 * theta - 1.0) / 4.0;
    std::vector<double> S(static_cast<std::size_t>(N));
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double p = trace_pairing(basis, n, h);
        sum += std::pow(basis.eigenvalues[n - 1], -2.0 * (1.0 + kappa)) * p * p;
        S[static_cast<std::size_t>(n - 1)] = sum;
    }
    return S;
}

// --------------------------------------------------------------------------
// Columnar export / import
// --------------------------------------------------------------------------

void save_basis(const SpectralBasis& basis, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("save basis: cannot open " + path);
    const int N = basis.mode_count();
    out << "fracspec-basis 1\n";
    out << "chi " << basis.chi << "\n";
    out << "dim " << basis.dim << "\n";
    out << "N " << N << "\n";
    out << "domain " << format_shortest(basis.domain.x0) << ' '
        << format_shortest(basis.domain.x1);
    if (basis.dim == 2)
        out << ' ' << format_shortest(basis.domain.y0) << ' '
            << format_shortest(basis.domain.y1);
    out << "\n";
    out << "mesh " << (basis.mesh_x.size() - 1) << "\n";
    out << "rho " << basis.coeffs.rho.source() << "\n";
    out << "a " << basis.coeffs.a.source() << "\n";
    out << "q " << basis.coeffs.q.source() << "\n";
    out << "modes\n";
    for (int n = 0; n < N; ++n) {
        out << format_shortest(basis.eigenvalues[n]);
        if (basis.dim == 1) {
            out << ' ' << format_shortest(basis.traces(0, n)) << ' '
                << format_shortest(basis.traces(1, n));
        } else {
            out << ' ' << basis.tensor_index[static_cast<std::size_t>(n)].first
                << ' ' << basis.tensor_index[static_cast<std::size_t>(n)].second;
        }
        out << "\n";
    }
    if (basis.dim == 1) {
        out << "mass\n";
        for (Eigen::Index i = 0; i < basis.mass_diag.size(); ++i)
            out << (i ? " " : "") << format_shortest(basis.mass_diag[i]);
        out << "\n";
        for (Eigen::Index i = 0; i < basis.mass_off.size(); ++i)
            out << (i ? " " : "") << format_shortest(basis.mass_off[i]);
        out << "\n";
        out << "vectors\n";
        for (Eigen::Index i = 0; i < basis.modes_1d.rows(); ++i) {
            for (int n = 0; n < N; ++n)
                out << (n ? " " : "") << format_shortest(basis.modes_1d(i, n));
            out << "\n";
        }
    }
    out << "end\n";
    if (!out) throw std::runtime_error("save basis: write failed for " + path);
}

namespace {

[[noreturn]] void load_fail(const std::string& what) {
    throw std::invalid_argument("load basis: " + what);
}

std::string expect_line(std::istream& in, const std::string& what) {
    std::string line;
    if (!std::getline(in, line)) load_fail("unexpected end of file (" + what + ")");
    return line;
}

}  // namespace

SpectralBasis load_basis(const std::string& path) {
    std::ifstream in(path);
    if (!in) load_fail("cannot open " + path);

    if (expect_line(in, "magic") != "fracspec-basis 1")
        load_fail("unrecognized file header");

    auto read_kv = [&](const std::string& key) -> std::string {
        const std::string line = expect_line(in, key);
        if (line.rfind(key + " ", 0) != 0)
            load_fail("expected '" + key + "', got '" + line + "'");
        return line.substr(key.size() + 1);
    };

    const int chi = std::stoi(read_kv("chi"));
    const int dim = std::stoi(read_kv("dim"));
    const int N = std::stoi(read_kv("N"));
    if (N < 1) load_fail("invalid mode count");

    Domain dom;
    dom.dim = dim;
    {
        std::istringstream ss(read_kv("domain"));
        ss >> dom.x0 >> dom.x1;
        if (dim == 2) ss >> dom.y0 >> dom.y1;
        if (!ss) load_fail("malformed domain line");
    }
    const int mesh_size = std::stoi(read_kv("mesh"));
    Coefficients coeffs;
    coeffs.rho = parse_expression(read_kv("rho"), dim == 1 ? "x" : "xy");
    coeffs.a = parse_expression(read_kv("a"), dim == 1 ? "x" : "xy");
    coeffs.q = parse_expression(read_kv("q"), dim == 1 ? "x" : "xy");

    if (expect_line(in, "modes") != "modes") load_fail("expected 'modes'");

    if (dim == 2) {
        // Tensor bases are rebuilt from the closed forms; the stored rows are
        // ordering metadata.
        for (int n = 0; n < N; ++n) (void)expect_line(in, "mode row");
        return build_basis(dom, coeffs, chi, N, mesh_size);
    }

    SpectralBasis basis;
    basis.chi = chi;
    basis.dim = 1;
    basis.domain = dom;
    auto cerrs = validate_coefficients(dom, coeffs);
    if (!cerrs.empty()) load_fail("stored coefficients violate invariants");
    basis.coeffs = coeffs;
    basis.eigenvalues.resize(N);
    basis.traces.resize(2, N);
    for (int n = 0; n < N; ++n) {
        std::istringstream ss(expect_line(in, "mode row"));
        ss >> basis.eigenvalues[n] >> basis.traces(0, n) >> basis.traces(1, n);
        if (!ss) load_fail("malformed mode row");
    }

    if (expect_line(in, "mass") != "mass") load_fail("expected 'mass'");
    const int nn = mesh_size + 1;
    basis.mass_diag.resize(nn);
    basis.mass_off.resize(nn - 1);
    {
        std::istringstream ss(expect_line(in, "mass diagonal"));
        for (Eigen::Index i = 0; i < basis.mass_diag.size(); ++i)
            ss >> basis.mass_diag[i];
        if (!ss) load_fail("malformed mass diagonal");
    }
    {
        std::istringstream ss(expect_line(in, "mass off-diagonal"));
        for (Eigen::Index i = 0; i < basis.mass_off.size(); ++i)
            ss >> basis.mass_off[i];
        if (!ss) load_fail("malformed mass off-diagonal");
    }

    if (expect_line(in, "vectors") != "vectors") load_fail("expected 'vectors'");
    basis.mesh_x.resize(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i)
        basis.mesh_x[static_cast<std::size_t>(i)] =
            dom.x0 + (dom.x1 - dom.x0) * static_cast<double>(i) / mesh_size;
    basis.modes_1d.resize(nn, N);
    for (int i = 0; i < nn; ++i) {
        std::istringstream ss(expect_line(in, "vector row"));
        for (int n = 0; n < N; ++n) ss >> basis.modes_1d(i, n);
        if (!ss) load_fail("malformed eigenvector row");
    }
    if (expect_line(in, "end") != "end") load_fail("expected 'end'");
    return basis;
}

}  // namespace fracspec
