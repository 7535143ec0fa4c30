#include "finsler/quadrature.hpp"

#include <cmath>

namespace finsler {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) < 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol * std::max(1.0, std::abs(whole)), max_depth);
}

double simpson_uniform(std::span<const double> values, double h) {
  const size_t n = values.size();
  double acc = 0;
  size_t i = 0;
  for (; i + 2 < n; i += 2) acc += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
  if (i + 1 < n) acc += 0.5 * h * (values[i] + values[i + 1]);
  return acc;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& xs, std::vector<double>& ws) {
  xs.assign(static_cast<size_t>(n), 0.0);
  ws.assign(static_cast<size_t>(n), 0.0);
  // Newton on Legendre polynomials over [-1, 1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    xs[static_cast<size_t>(i)] = 0.5 * (b - a) * (-x) + 0.5 * (a + b);
    xs[static_cast<size_t>(n - 1 - i)] = 0.5 * (b - a) * x + 0.5 * (a + b);
    ws[static_cast<size_t>(i)] = ws[static_cast<size_t>(n - 1 - i)] = 0.5 * (b - a) * w;
  }
}

SphereQuadrature sphere_quadrature(int m, int resolution) {
  SphereQuadrature q;
  if (m < 1) raise(Err::QuadratureFailure, "sphere quadrature needs dimension >= 1");
  if (m == 1) {
    VectorXd plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    q.dirs = {plus, minus};
    q.weights = {1.0, 1.0};
    return q;
  }
  const int polar_axes = m - 2;
  std::vector<std::vector<double>> txs(static_cast<size_t>(polar_axes)),
      tws(static_cast<size_t>(polar_axes));
  for (int j = 0; j < polar_axes; ++j)
    gauss_legendre(resolution, 0.0, M_PI, txs[static_cast<size_t>(j)], tws[static_cast<size_t>(j)]);
  const int nphi = 2 * resolution;

  std::vector<int> idx(static_cast<size_t>(polar_axes), 0);
  while (true) {
    double wpolar = 1.0;
    std::vector<double> theta(static_cast<size_t>(polar_axes));
    for (int j = 0; j < polar_axes; ++j) {
      theta[static_cast<size_t>(j)] = txs[static_cast<size_t>(j)][static_cast<size_t>(idx[static_cast<size_t>(j)])];
      const int sinpow = m - 2 - j;
      wpolar *= tws[static_cast<size_t>(j)][static_cast<size_t>(idx[static_cast<size_t>(j)])] *
                std::pow(std::sin(theta[static_cast<size_t>(j)]), sinpow);
    }
    for (int iphi = 0; iphi < nphi; ++iphi) {
      const double phi = 2.0 * M_PI * (iphi + 0.5) / nphi;
      VectorXd d(m);
      double prod = 1.0;
      for (int j = 0; j < polar_axes; ++j) {
        d[j] = prod * std::cos(theta[static_cast<size_t>(j)]);
        prod *= std::sin(theta[static_cast<size_t>(j)]);
      }
      d[m - 2] = prod * std::cos(phi);
      d[m - 1] = prod * std::sin(phi);
      q.dirs.push_back(d);
      q.weights.push_back(wpolar * 2.0 * M_PI / nphi);
    }
    int ax = polar_axes - 1;
    for (; ax >= 0; --ax) {
      if (++idx[static_cast<size_t>(ax)] < resolution) break;
      idx[static_cast<size_t>(ax)] = 0;
    }
    if (ax < 0) break;
  }
  return q;
}

AngleQuadrature conormal_angle_quadrature(int q, int resolution) {
  AngleQuadrature out;
  if (q == 1) {
    VectorXd plus(1), minus(1);
    plus << 0.0;
    minus << M_PI;
    out.thetas = {plus, minus};
    out.weights = {1.0, 1.0};
    return out;
  }
  const int p = q - 1;
  std::vector<std::vector<double>> xs(static_cast<size_t>(p)), ws(static_cast<size_t>(p));
  for (int j = 0; j + 1 < p; ++j)
    gauss_legendre(resolution, 0.0, M_PI, xs[static_cast<size_t>(j)], ws[static_cast<size_t>(j)]);
  {
    const int n = 2 * resolution;
    auto& x = xs[static_cast<size_t>(p - 1)];
    auto& w = ws[static_cast<size_t>(p - 1)];
    for (int i = 0; i < n; ++i) {
      x.push_back(2.0 * M_PI * (i + 0.5) / n);
      w.push_back(2.0 * M_PI / n);
    }
  }
  std::vector<size_t> idx(static_cast<size_t>(p), 0);
  while (true) {
    VectorXd theta(p);
    double weight = 1.0;
    for (int j = 0; j < p; ++j) {
      theta[j] = xs[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]];
      weight *= ws[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]];
    }
    out.thetas.push_back(theta);
    out.weights.push_back(weight);
    int ax = p - 1;
    for (; ax >= 0; --ax) {
      if (++idx[static_cast<size_t>(ax)] < xs[static_cast<size_t>(ax)].size()) break;
      idx[static_cast<size_t>(ax)] = 0;
    }
    if (ax < 0) break;
  }
  return out;
}

BoxQuadrature box_quadrature(const Chart& chart, const std::vector<int>& nodes_per_axis,
                             const std::vector<std::array<double, 2>>* sub_bounds) {
  const int m = chart.dim;
  if (static_cast<int>(nodes_per_axis.size()) != m)
    raise(Err::QuadratureFailure, "nodes_per_axis size mismatch");
  std::vector<std::vector<double>> xs(static_cast<size_t>(m)), ws(static_cast<size_t>(m));
  std::vector<double> cell(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto b = sub_bounds ? (*sub_bounds)[static_cast<size_t>(i)] : chart.bounds[static_cast<size_t>(i)];
    const int n = nodes_per_axis[static_cast<size_t>(i)];
    cell[static_cast<size_t>(i)] = (b[1] - b[0]) / n;
    if (chart.periodic[static_cast<size_t>(i)] && !sub_bounds) {
      for (int j = 0; j < n; ++j) {
        xs[static_cast<size_t>(i)].push_back(b[0] + (b[1] - b[0]) * (j + 0.5) / n);
        ws[static_cast<size_t>(i)].push_back((b[1] - b[0]) / n);
      }
    } else {
      gauss_legendre(n, b[0], b[1], xs[static_cast<size_t>(i)], ws[static_cast<size_t>(i)]);
    }
  }
  BoxQuadrature out;
  std::vector<size_t> idx(static_cast<size_t>(m), 0);
  while (true) {
    VectorXd x(m);
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      x[i] = xs[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
      w *= ws[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
    }
    if (!chart.is_singular(x)) {
      out.nodes.push_back(x);
      out.weights.push_back(w);
    } else {
      // Subdivide the cell once (3 midpoints per axis) and keep the clean part.
      const int sub = 3;
      double subw = w / std::pow(sub, m);
      std::vector<int> sidx(static_cast<size_t>(m), 0);
      while (true) {
        VectorXd sx = x;
        for (int i = 0; i < m; ++i)
          sx[i] += cell[static_cast<size_t>(i)] * (sidx[static_cast<size_t>(i)] - (sub - 1) / 2.0) / sub;
        if (!chart.is_singular(sx)) {
          out.nodes.push_back(sx);
          out.weights.push_back(subw);
        } else {
          out.skipped_measure += subw;
        }
        int ax = m - 1;
        for (; ax >= 0; --ax) {
          if (++sidx[static_cast<size_t>(ax)] < sub) break;
          sidx[static_cast<size_t>(ax)] = 0;
        }
        if (ax < 0) break;
      }
    }
    int ax = m - 1;
    for (; ax >= 0; --ax) {
      if (++idx[static_cast<size_t>(ax)] < xs[static_cast<size_t>(ax)].size()) break;
      idx[static_cast<size_t>(ax)] = 0;
    }
    if (ax < 0) break;
  }
  return out;
}

}  // namespace finsler
