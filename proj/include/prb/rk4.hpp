#pragma once

#include <array>
#include <cstddef>

namespace prb {

// Classical fixed-step 4th-order Runge-Kutta on a fixed-size state.
template <std::size_t N>
using OdeState = std::array<double, N>;

template <std::size_t N, typename Rhs>
OdeState<N> rk4_step(const Rhs& rhs, double s, const OdeState<N>& u, double h) {
  const double h2 = 0.5 * h;
  OdeState<N> tmp;

  const OdeState<N> k1 = rhs(s, u);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = u[i] + h2 * k1[i];
  const OdeState<N> k2 = rhs(s + h2, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = u[i] + h2 * k2[i];
  const OdeState<N> k3 = rhs(s + h2, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = u[i] + h * k3[i];
  const OdeState<N> k4 = rhs(s + h, tmp);

  OdeState<N> next;
  for (std::size_t i = 0; i < N; ++i) next[i] = u[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return next;
}

// Integrates over `steps` uniform intervals from s0, calling observe(j, u)
// at every node j = 0..steps.
template <std::size_t N, typename Rhs, typename Observer>
OdeState<N> rk4_integrate(const Rhs& rhs, OdeState<N> u, double s0, double h, std::size_t steps,
                          Observer&& observe) {
  observe(std::size_t{0}, u);
  for (std::size_t j = 0; j < steps; ++j) {
    u = rk4_step<N>(rhs, s0 + static_cast<double>(j) * h, u, h);
    observe(j + 1, u);
  }
  return u;
}

}  // namespace prb
