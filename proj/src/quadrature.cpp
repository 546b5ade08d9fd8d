#include "shellfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "shellfield/errors.hpp"

namespace shellfield::quadrature {

namespace {

// Kronrod abscissae (positive half) and weights; every other node is also a
// 7-point Gauss node.
constexpr double kXgk[8] = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Estimate est;
  double roundoff;
  bool operator<(const Panel& o) const { return est.error < o.est.error; }
};

Estimate gk15(const std::function<double(double)>& f, double a, double b, double& roundoff) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);
  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1)
      gauss += kWg[j / 2] * (f1 + f2);
  }
  // QUADPACK-style error scaling
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    asc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  asc *= std::abs(half);
  Estimate est;
  est.value = kronrod * half;
  est.evaluations = 15;
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0 && err != 0)
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  roundoff = 50.0 * 2.2e-16 * abs_sum * std::abs(half);
  est.error = std::max(err, roundoff);
  return est;
}

Panel make_panel(const std::function<double(double)>& f, double a, double b) {
  Panel p{a, b, {}, 0.0};
  p.est = gk15(f, a, b, p.roundoff);
  return p;
}

}  // namespace

Estimate gauss_kronrod15(const std::function<double(double)>& f, double a, double b) {
  double roundoff;
  return gk15(f, a, b, roundoff);
}

Estimate integrate(const std::function<double(double)>& f, std::span<const double> edges,
                   const AdaptiveOptions& opts) {
  if (edges.size() < 2)
    throw ArgumentError("integrate: need at least two panel edges");
  std::priority_queue<Panel> heap;
  Estimate total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] <= edges[i])
      continue;
    Panel p = make_panel(f, edges[i], edges[i + 1]);
    total.value += p.est.value;
    total.error += p.est.error;
    total.evaluations += p.est.evaluations;
    heap.push(p);
  }
  int splits = 0;
  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value)); };
  while (!heap.empty() && total.error > target()) {
    if (splits >= opts.max_subdivisions)
      throw QuadratureError("integrate: no convergence after " + std::to_string(splits) +
                                " subdivisions (error estimate " +
                                std::to_string(total.error) + ")",
                            total.value, total.error);
    Panel worst = heap.top();
    if (worst.est.error <= worst.roundoff)
      break;  // remaining error is roundoff; splitting cannot reduce it
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // panel cannot be split further at double precision
      throw QuadratureError("integrate: panel collapsed to machine precision",
                            total.value, total.error);
    }
    heap.pop();
    Panel left = make_panel(f, worst.a, mid);
    Panel right = make_panel(f, mid, worst.b);
    total.value += left.est.value + right.est.value - worst.est.value;
    total.error += left.est.error + right.est.error - worst.est.error;
    total.evaluations += 30;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // re-sum to shed accumulated cancellation in the running totals
  double value = 0.0, error = 0.0;
  while (!heap.empty()) {
    value += heap.top().est.value;
    error += heap.top().est.error;
    heap.pop();
  }
  total.value = value;
  total.error = error;
  return total;
}

std::vector<double> panel_edges(double a, double b, std::span<const double> breakpoints,
                                double max_width, int grade_levels) {
  std::vector<double> coarse{a};
  for (double p : breakpoints)
    if (p > a && p < b)
      coarse.push_back(p);
  coarse.push_back(b);
  std::sort(coarse.begin(), coarse.end());
  coarse.erase(std::unique(coarse.begin(), coarse.end()), coarse.end());

  std::vector<double> edges{a};
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    const double lo = coarse[i], hi = coarse[i + 1];
    std::size_t pieces = 1;
    if (max_width > 0)
      pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / max_width)));
    for (std::size_t k = 1; k <= pieces; ++k)
      edges.push_back(k == pieces ? hi : lo + (hi - lo) * double(k) / double(pieces));
  }
  if (grade_levels > 0 && edges.size() >= 2) {
    const double first = edges[1] - a;
    std::vector<double> graded;
    for (int k = grade_levels; k >= 1; --k)
      graded.push_back(a + first * std::ldexp(1.0, -k));
    edges.insert(edges.begin() + 1, graded.begin(), graded.end());
  }
  return edges;
}

}  // namespace shellfield::quadrature
