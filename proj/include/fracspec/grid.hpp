#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fracspec {

/// Time grid on [0, T] with geometric refinement near 0 switching to uniform
/// steps: t_0 = 0, first step T*1e-8, steps growing by the ratio 1.15 until
/// they reach the uniform target T/uniform_steps, then equal steps up to
/// exactly T.
///
/// The geometric phase resolves the t^{alpha-1} initial layer: the window
/// [1e-6 T, 1e-2 T] used by the regularity fit carries ~65 grid points
/// (well above the 12 the fit requires) independent of T.
inline std::vector<double> make_time_grid(double T, std::size_t uniform_steps = 240) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("time grid: horizon T must be positive");
    if (uniform_steps == 0)
        throw std::invalid_argument("time grid: uniform_steps must be >= 1");

    const double dt_uniform = T / static_cast<double>(uniform_steps);
    const double ratio = 1.15;

    std::vector<double> grid;
    grid.reserve(uniform_steps + 128);
    grid.push_back(0.0);

    double t = 0.0;
    double dt = T * 1e-8;
    while (dt < dt_uniform && t + dt < T) {
        t += dt;
        grid.push_back(t);
        dt *= ratio;
    }

    // Uniform tail: split the remainder into equal steps no larger than the
    // uniform target so the grid ends exactly at T.
    const double remaining = T - t;
    if (remaining > 0.0) {
        const auto m = static_cast<std::size_t>(
            std::ceil(remaining / dt_uniform - 1e-12));
        const std::size_t steps = m == 0 ? 1 : m;
        const double h = remaining / static_cast<double>(steps);
        for (std::size_t j = 1; j < steps; ++j)
            grid.push_back(t + h * static_cast<double>(j));
        grid.push_back(T);
    }
    return grid;
}

}  // namespace fracspec
