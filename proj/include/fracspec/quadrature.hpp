#pragma once

/// Minimal numerical-integration toolkit: tanh-sinh for (possibly
/// endpoint-singular) finite intervals and an adaptive Gauss rule for smooth
/// or piecewise-smooth integrands. Both are templated on the integrand's
/// value type so complex contour integrals reuse the same machinery.
///
/// Gauss-Legendre nodes are generated at runtime by Newton iteration on the
/// Legendre recurrence (machine-precision, no transcribed tables) and cached
/// per order behind a mutex.

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace fracspec::quad {

struct Options {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_levels = 10;  // tanh-sinh refinement levels
    int max_depth = 13;   // adaptive-Gauss bisection depth
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// tanh-sinh integrands may take (x) or (x, xc), where xc is the signed
// distance to the nearest endpoint (positive in the left half, negative in
// the right half). The two-argument form lets integrands with an endpoint
// singularity avoid re-deriving the tiny distance from x itself, which
// would bottom out at ~ulp(endpoint) of absolute error.
template <class F>
auto call_node(F& f, double x, double xc) {
    if constexpr (std::is_invocable_v<F&, double, double>) {
        return f(x, xc);
    } else {
        return f(x);
    }
}
template <class F>
using node_result_t = decltype(call_node(std::declval<F&>(), 0.0, 0.0));
}  // namespace detail

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
inline const std::pair<std::vector<double>, std::vector<double>>&
gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w)))
        .first->second;
}

/// Tanh-sinh (double-exponential) quadrature on (a, b). Tolerates integrable
/// endpoint singularities; nodes that collapse onto an endpoint in floating
/// point are skipped (their doubly-exponential weights are below underflow).
///
/// The integrand may take either (x) or (x, xc); see detail::call_node.
template <class F>
auto tanh_sinh(F&& f, double a, double b, Options opt = {})
    -> Result<detail::node_result_t<F>> {
    using T = detail::node_result_t<F>;
    Result<T> res;
    if (!(b > a)) {
        res.converged = true;
        return res;
    }
    const double half = 0.5 * (b - a);
    const double tmax = 6.11;  // beyond this every weight underflows

    // One node evaluation at parameter t (captures the endpoint-offset form
    // x = a + (b-a)/(e^{2g}+1) to avoid cancellation near the ends).
    auto node = [&](double t, T& acc) {
        const double g = M_PI_2 * std::sinh(t);
        const double e2g = std::exp(2.0 * g);
        const double off = (b - a) / (e2g + 1.0);  // distance from an endpoint
        const double w = half * M_PI * std::cosh(t) /
                         (std::cosh(g) * std::cosh(g)) * 0.5;
        // Symmetric pair: x = a + off and x = b - off. Once off drops below
        // ulp(endpoint) the node position rounds onto the endpoint itself;
        // still evaluate (two-argument integrands see the exact offset) and
        // let the finiteness guard drop genuine endpoint blow-ups.
        if (off > 0.0) {
            T v = detail::call_node(f, a + off, off);
            ++res.evaluations;
            if (std::isfinite(detail::magnitude(v))) acc += w * v;
            v = detail::call_node(f, b - off, -off);
            ++res.evaluations;
            if (std::isfinite(detail::magnitude(v))) acc += w * v;
        }
    };

    double h = 1.0;
    T sum{};
    {   // level 0: t = 0 plus coarse lattice
        T acc{};
        {
            const double w0 = half * M_PI_2;
            T v = detail::call_node(f, 0.5 * (a + b), half);
            ++res.evaluations;
            if (std::isfinite(detail::magnitude(v))) acc += w0 * v;
        }
        for (double t = h; t <= tmax; t += h) node(t, acc);
        sum = acc * h;
    }
    T prev = sum;
    for (int level = 1; level <= opt.max_levels; ++level) {
        h *= 0.5;
        T acc{};
        for (double t = h; t <= tmax; t += 2.0 * h) node(t, acc);
        sum = sum * 0.5 + acc * h;
        const double diff = detail::magnitude(sum - prev);
        const double scale = detail::magnitude(sum);
        res.error = diff;
        if (level >= 3 &&
            diff <= std::max(opt.abs_tol, opt.rel_tol * scale)) {
            res.converged = true;
            res.value = sum;
            return res;
        }
        prev = sum;
    }
    res.value = sum;
    return res;
}

namespace detail {

template <class F, class T>
void gauss_segment(F& f, double a, double b, const Options& opt, int depth,
                   Result<T>& res) {
    // Magic statics: one mutex-guarded construction, lock-free afterwards.
    static const auto& rule15 = gauss_legendre(15);
    static const auto& rule31 = gauss_legendre(31);
    const auto& [x15, w15] = rule15;
    const auto& [x31, w31] = rule31;
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    T g15{}, g31{};
    std::vector<T> vals31(31);
    for (int i = 0; i < 31; ++i) {
        vals31[i] = f(c + r * x31[i]);
        g31 += w31[i] * vals31[i];
    }
    for (int i = 0; i < 15; ++i) g15 += w15[i] * f(c + r * x15[i]);
    res.evaluations += 46;
    g15 = g15 * r;
    g31 = g31 * r;
    const double err = magnitude(g31 - g15);
    const double scale = magnitude(g31);
    if (err <= std::max(opt.abs_tol, opt.rel_tol * std::max(scale, 1e-300)) ||
        depth >= opt.max_depth) {
        res.value += g31;
        res.error += err;
        if (depth >= opt.max_depth &&
            err > std::max(opt.abs_tol, opt.rel_tol * scale)) {
            res.converged = false;
        }
        return;
    }
    gauss_segment(f, a, c, opt, depth + 1, res);
    gauss_segment(f, c, b, opt, depth + 1, res);
}

}  // namespace detail

/// Adaptive Gauss quadrature (15/31-point pair, recursive bisection) for
/// smooth integrands on [a, b].
template <class F>
auto adaptive_gauss(F&& f, double a, double b, Options opt = {})
    -> Result<std::invoke_result_t<F&, double>> {
    using T = std::invoke_result_t<F&, double>;
    Result<T> res;
    res.converged = true;
    if (!(b > a)) return res;
    detail::gauss_segment(f, a, b, opt, 0, res);
    return res;
}

/// Adaptive Gauss over an explicit segment list (for integrands with known
/// interior structure, e.g. near-pole spikes on a branch-cut contour).
template <class F>
auto adaptive_gauss_segmented(F&& f, const std::vector<double>& breakpoints,
                              Options opt = {})
    -> Result<std::invoke_result_t<F&, double>> {
    using T = std::invoke_result_t<F&, double>;
    Result<T> res;
    res.converged = true;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto part = adaptive_gauss(f, breakpoints[i], breakpoints[i + 1], opt);
        res.value += part.value;
        res.error += part.error;
        res.evaluations += part.evaluations;
        res.converged = res.converged && part.converged;
    }
    return res;
}

}  // namespace fracspec::quad
