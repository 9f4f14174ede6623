#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "stablekit/errors.hpp"

namespace stablekit {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 4000;
};

template <class V>
struct QuadratureResult {
  V value{};
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 10/21 abscissae and weights on [-1, 1] (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452954, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double quad_norm(double v) { return std::abs(v); }

template <std::size_t N>
double quad_norm(const std::array<double, N>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class V>
struct QuadOps {
  static V zero() { return V{}; }
  static void axpy(V& acc, double w, const V& x) { acc += w * x; }
  static V sub(const V& a, const V& b) { return a - b; }
};

template <std::size_t N>
struct QuadOps<std::array<double, N>> {
  using V = std::array<double, N>;
  static V zero() { return V{}; }
  static void axpy(V& acc, double w, const V& x) {
    for (std::size_t i = 0; i < N; ++i) acc[i] += w * x[i];
  }
  static V sub(const V& a, const V& b) {
    V r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
    return r;
  }
};

template <class V>
struct Panel {
  double a, b;
  V value;
  double error;
};

template <class V, class F>
Panel<V> gk21(F& f, double a, double b) {
  using Ops = QuadOps<V>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V kronrod = Ops::zero();
  V gauss = Ops::zero();
  const V fc = f(c);
  Ops::axpy(kronrod, kWgk[10], fc);
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const V f1 = f(c - dx);
    const V f2 = f(c + dx);
    Ops::axpy(kronrod, kWgk[j], f1);
    Ops::axpy(kronrod, kWgk[j], f2);
    if (j % 2 == 1) {
      Ops::axpy(gauss, kWg[j / 2], f1);
      Ops::axpy(gauss, kWg[j / 2], f2);
    }
  }
  V value = Ops::zero();
  Ops::axpy(value, h, kronrod);
  V gv = Ops::zero();
  Ops::axpy(gv, h, gauss);
  return {a, b, value, quad_norm(Ops::sub(value, gv))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (10/21) quadrature over consecutive
/// panels [breaks[0], breaks[1]], ..., splitting the panel with the largest
/// error estimate until the summed error meets max(abs_tol, rel_tol*|I|).
/// V is double or std::array<double, N> (error measured in the max norm).
/// Throws NumericalFailure when max_subdivisions is exhausted.
template <class V = double, class F>
QuadratureResult<V> integrate(F&& f, std::span<const double> breaks,
                              const QuadratureSpec& spec = {}) {
  using Ops = detail::QuadOps<V>;
  using Panel = detail::Panel<V>;
  if (breaks.size() < 2) throw InvalidInput("integrate needs at least two break points");
  std::vector<Panel> heap;
  heap.reserve(64);
  auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  QuadratureResult<V> out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] == breaks[i]) continue;
    heap.push_back(detail::gk21<V>(f, breaks[i], breaks[i + 1]));
    out.evaluations += 21;
  }
  std::make_heap(heap.begin(), heap.end(), cmp);
  auto totals = [&]() {
    V v = Ops::zero();
    double e = 0.0;
    for (const auto& p : heap) {
      Ops::axpy(v, 1.0, p.value);
      e += p.error;
    }
    return std::pair<V, double>(v, e);
  };
  auto [value, error] = totals();
  int splits = 0;
  while (!heap.empty() &&
         error > std::max(spec.abs_tol, spec.rel_tol * detail::quad_norm(value))) {
    if (splits >= spec.max_subdivisions)
      throw NumericalFailure("adaptive quadrature did not reach tolerance (error " +
                             std::to_string(error) + ")");
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision; accept it.
      if (splits == 0 && heap.empty()) break;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    const Panel left = detail::gk21<V>(f, worst.a, mid);
    const Panel right = detail::gk21<V>(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cmp);
    out.evaluations += 42;
    ++splits;
    // Incremental totals drift; recompute every so often.
    if (splits % 64 == 0) {
      std::tie(value, error) = totals();
    } else {
      Ops::axpy(value, 1.0, left.value);
      Ops::axpy(value, 1.0, right.value);
      Ops::axpy(value, -1.0, worst.value);
      error += left.error + right.error - worst.error;
    }
  }
  out.value = value;
  out.error = error;
  return out;
}

template <class V = double, class F>
QuadratureResult<V> integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  const std::array<double, 2> br{a, b};
  return integrate<V>(std::forward<F>(f), std::span<const double>(br), spec);
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

}  // namespace stablekit
