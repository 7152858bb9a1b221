#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued
// complex integrands on a real interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "trinoid/errors.hpp"

namespace trinoid::quad {

using cplx = std::complex<double>;

template <std::size_t N>
using CVec = std::array<cplx, N>;

namespace detail {

inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
struct Panel {
  double a, b;
  CVec<N> value;
  std::array<double, N> error;
  double abs_mass;  // integral of max_k |f_k|, for the round-off floor

  double worst() const { return *std::max_element(error.begin(), error.end()); }
};

template <std::size_t N, class F>
Panel<N> gauss_kronrod(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  CVec<N> k{}, g{};
  double mass = 0.0;
  auto accumulate = [&](const CVec<N>& v, double wk, double wg) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      k[i] += wk * v[i];
      g[i] += wg * v[i];
      m = std::max(m, std::abs(v[i]));
    }
    mass += wk * m;
  };
  for (std::size_t j = 0; j < 7; ++j) {
    const double wg = (j % 2 == 1) ? kWg[j / 2] : 0.0;
    accumulate(f(c - h * kXk[j]), kWk[j], wg);
    accumulate(f(c + h * kXk[j]), kWk[j], wg);
  }
  accumulate(f(c), kWk[7], kWg[3]);

  Panel<N> p{a, b, {}, {}, std::fabs(h) * mass};
  for (std::size_t i = 0; i < N; ++i) {
    p.value[i] = h * k[i];
    p.error[i] = std::abs(h * (k[i] - g[i]));
  }
  return p;
}

}  // namespace detail

template <std::size_t N>
struct Result {
  CVec<N> value;
  std::array<double, N> error;
  int panels = 0;
};

struct Options {
  double abs_tol = 1e-11;
  int max_panels = 4000;
};

/// Integrate f over [a, b] until every component's estimated absolute error
/// is below opts.abs_tol, or below the round-off floor implied by the
/// magnitude of the integrand. Throws QuadratureError otherwise.
template <std::size_t N, class F>
Result<N> integrate(const F& f, double a, double b, const Options& opts = {}) {
  std::vector<detail::Panel<N>> panels{detail::gauss_kronrod<N>(f, a, b)};

  auto totals = [&](CVec<N>& value, std::array<double, N>& error, double& mass) {
    value.fill(cplx{});
    error.fill(0.0);
    mass = 0.0;
    for (const auto& p : panels) {
      for (std::size_t i = 0; i < N; ++i) {
        value[i] += p.value[i];
        error[i] += p.error[i];
      }
      mass += p.abs_mass;
    }
  };

  Result<N> out;
  double mass = 0.0;
  for (;;) {
    totals(out.value, out.error, mass);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mass;
    const double target = std::max(opts.abs_tol, floor);
    const double worst = *std::max_element(out.error.begin(), out.error.end());
    out.panels = static_cast<int>(panels.size());
    if (worst <= target) return out;
    if (static_cast<int>(panels.size()) >= opts.max_panels) {
      throw QuadratureError("adaptive quadrature did not converge: achieved " + std::to_string(worst) +
                                " against tolerance " + std::to_string(target),
                            worst);
    }
    auto it = std::max_element(panels.begin(), panels.end(),
                               [](const auto& l, const auto& r) { return l.worst() < r.worst(); });
    const double a0 = it->a, b0 = it->b, mid = 0.5 * (a0 + b0);
    if (!(mid > std::min(a0, b0) && mid < std::max(a0, b0))) {
      throw QuadratureError("adaptive quadrature exhausted floating-point resolution", worst);
    }
    *it = detail::gauss_kronrod<N>(f, a0, mid);
    panels.push_back(detail::gauss_kronrod<N>(f, mid, b0));
  }
}

}  // namespace trinoid::quad
