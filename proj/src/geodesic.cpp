#include "finsler/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace finsler {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct Stepper {
  const OdeRhs& rhs;
  int n;
  std::array<VectorXd, 7> k;
  VectorXd work;

  explicit Stepper(const OdeRhs& f, int dim) : rhs(f), n(dim), work(dim) {
    for (auto& v : k) v = VectorXd::Zero(dim);
  }

  // k[0] must hold rhs(t, y). Fills y5 and the embedded error estimate.
  void step(double t, const VectorXd& y, double h, VectorXd& y5, VectorXd& err) {
    for (int s = 1; s < 7; ++s) {
      work = y;
      for (int j = 0; j < s; ++j)
        if (kA[s][j] != 0.0) work += (h * kA[s][j]) * k[j];
      rhs(t + kC[s] * h, work, k[s]);
    }
    y5 = y;
    for (int j = 0; j < 6; ++j)
      if (kA[6][j] != 0.0) y5 += (h * kA[6][j]) * k[j];
    // embedded error estimate y5 - y4
    err = VectorXd::Zero(n);
    for (int j = 0; j < 7; ++j) {
      const double b5 = (j < 6) ? kA[6][j] : 0.0;
      const double diff = b5 - kB4[j];
      if (diff != 0.0) err += (h * diff) * k[j];
    }
  }
};

}  // namespace

std::vector<double> uniform_grid(double t0, double t1, int nodes) {
  std::vector<double> ts(static_cast<size_t>(nodes));
  for (int i = 0; i < nodes; ++i)
    ts[static_cast<size_t>(i)] = t0 + (t1 - t0) * i / (nodes - 1);
  return ts;
}

IntegratorStats integrate_to_nodes(const OdeRhs& rhs, VectorXd state, std::span<const double> ts,
                                   const std::function<void(int, double, const VectorXd&)>& emit,
                                   const IntegratorOptions& opt) {
  IntegratorStats stats;
  const int n = static_cast<int>(state.size());
  Stepper st(rhs, n);
  double t = ts[0];
  emit(0, t, state);
  rhs(t, state, st.k[0]);
  VectorXd y5(n), err(n);

  double h = opt.h_init;
  for (size_t node = 1; node < ts.size(); ++node) {
    const double tend = ts[node];
    if (opt.fixed_step) {
      const double hs = (tend - t) / opt.fixed_substeps;
      for (int i = 0; i < opt.fixed_substeps; ++i) {
        st.step(t, state, hs, y5, err);
        t += hs;
        state = y5;
        if (opt.post_step) opt.post_step(t, state);
        rhs(t, state, st.k[0]);
        ++stats.steps;
      }
    } else {
      while (tend - t > 1e-14 * (1.0 + std::abs(tend))) {
        const double hstep = std::min(h, tend - t);
        st.step(t, state, hstep, y5, err);
        double enorm = 0;
        for (int i = 0; i < n; ++i) {
          const double sc = opt.atol + opt.rtol * std::max(std::abs(state[i]), std::abs(y5[i]));
          enorm += (err[i] / sc) * (err[i] / sc);
        }
        enorm = std::sqrt(enorm / n);
        if (enorm <= 1.0) {
          t += hstep;
          state = y5;
          if (opt.post_step) opt.post_step(t, state);
          st.k[6].swap(st.k[0]);  // FSAL
          if (opt.post_step) rhs(t, state, st.k[0]);
          ++stats.steps;
          const double f = enorm > 0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
          h = hstep * std::clamp(f, 0.2, 5.0);
        } else {
          ++stats.rejected;
          h = hstep * std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 0.9);
          if (h < opt.h_min) raise(Err::StepFailure, "step size underflow");
        }
        if (stats.steps + stats.rejected > opt.max_steps)
          raise(Err::StepFailure, "step budget exhausted");
      }
    }
    emit(static_cast<int>(node), tend, state);
  }
  return stats;
}

std::function<void(double, VectorXd&)> chart_guard(const MetricSpec& spec) {
  const Chart& chart = spec.chart();
  return [&chart](double t, VectorXd& s) {
    VectorXd x = s.head(chart.dim);
    x = chart.wrap(x);
    if (!chart.contains(x))
      raise(Err::ChartExit, "trajectory left the chart at t = " + std::to_string(t));
    if (chart.is_singular(x))
      raise(Err::ChartExit, "trajectory entered the singular set at t = " + std::to_string(t));
    s.head(chart.dim) = x;
  };
}

namespace {

OdeRhs geodesic_rhs(const MetricSpec& spec) {
  const int m = spec.dim();
  return [&spec, m](double, const VectorXd& s, VectorXd& ds) {
    ds.resize(2 * m);
    SVec<double> xs(s.data(), s.data() + m);
    SVec<double> vs(s.data() + m, s.data() + 2 * m);
    SVec<double> G = spray<double>(spec, xs, vs);
    for (int i = 0; i < m; ++i) {
      ds[i] = s[m + i];
      ds[m + i] = -2.0 * G[i];
    }
  };
}

}  // namespace

double GeodesicSegment::speed(int node) const {
  return eval_norm(*spec, xs[static_cast<size_t>(node)], vs[static_cast<size_t>(node)]);
}

double GeodesicSegment::length() const {
  // Composite Simpson over the uniform grid; the final interval falls back
  // to trapezoid when the interval count is odd.
  const size_t n = ts.size();
  double acc = 0;
  size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h = ts[i + 1] - ts[i];
    acc += h / 3.0 *
           (speed(static_cast<int>(i)) + 4.0 * speed(static_cast<int>(i + 1)) +
            speed(static_cast<int>(i + 2)));
  }
  if (i + 1 < n) {
    const double h = ts[i + 1] - ts[i];
    acc += 0.5 * h * (speed(static_cast<int>(i)) + speed(static_cast<int>(i + 1)));
  }
  return acc;
}

void GeodesicSegment::write_csv(std::ostream& os) const {
  const int m = spec->dim();
  os << "t";
  for (int i = 0; i < m; ++i) os << ",x" << i + 1;
  for (int i = 0; i < m; ++i) os << ",v" << i + 1;
  os << "\n";
  for (size_t j = 0; j < ts.size(); ++j) {
    os << ts[j];
    for (int i = 0; i < m; ++i) os << "," << xs[j][i];
    for (int i = 0; i < m; ++i) os << "," << vs[j][i];
    os << "\n";
  }
}

GeodesicSegment integrate_geodesic(const MetricSpec& spec, const VectorXd& x0, const VectorXd& y0,
                                   double t_end, int nodes, IntegratorOptions opt) {
  if (y0.norm() == 0.0) raise(Err::NonAdmissible, "geodesic needs a nonzero initial velocity");
  const int m = spec.dim();
  GeodesicSegment seg;
  seg.spec = &spec;
  seg.ts = uniform_grid(0.0, t_end, nodes);
  seg.xs.resize(seg.ts.size());
  seg.vs.resize(seg.ts.size());
  VectorXd s(2 * m);
  s.head(m) = x0;
  s.segment(m, m) = y0;
  if (!opt.post_step) opt.post_step = chart_guard(spec);
  seg.stats = integrate_to_nodes(
      geodesic_rhs(spec), s, seg.ts,
      [&](int node, double, const VectorXd& st) {
        seg.xs[static_cast<size_t>(node)] = st.head(m);
        seg.vs[static_cast<size_t>(node)] = st.segment(m, m);
      },
      opt);
  return seg;
}

VectorXd exp_map(const MetricSpec& spec, const VectorXd& x, const VectorXd& y,
                 IntegratorOptions opt) {
  return integrate_geodesic(spec, x, y, 1.0, 2, opt).xs.back();
}

TransportResult parallel_transport(const MetricSpec& spec, const VectorXd& x0, const VectorXd& y0,
                                   const MatrixXd& vectors, double t_end, int nodes,
                                   IntegratorOptions opt) {
  const int m = spec.dim();
  const int c = static_cast<int>(vectors.cols());
  TransportResult out;
  out.segment.spec = &spec;
  out.segment.ts = uniform_grid(0.0, t_end, nodes);
  out.segment.xs.resize(out.segment.ts.size());
  out.segment.vs.resize(out.segment.ts.size());
  out.frames.resize(out.segment.ts.size());

  VectorXd s(2 * m + m * c);
  s.head(m) = x0;
  s.segment(m, m) = y0;
  for (int a = 0; a < c; ++a) s.segment(2 * m + a * m, m) = vectors.col(a);

  auto rhs = [&spec, m, c](double, const VectorXd& st, VectorXd& ds) {
    ds.resize(st.size());
    SVec<double> xs(st.data(), st.data() + m);
    SVec<double> vs(st.data() + m, st.data() + 2 * m);
    SVec<double> G = spray<double>(spec, xs, vs);
    Ten3d Gm = chern<double>(spec, xs, vs);
    for (int i = 0; i < m; ++i) {
      ds[i] = st[m + i];
      ds[m + i] = -2.0 * G[i];
    }
    for (int a = 0; a < c; ++a)
      for (int i = 0; i < m; ++i) {
        double acc = 0;
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) acc -= Gm(i, j, k) * st[2 * m + a * m + j] * st[m + k];
        ds[2 * m + a * m + i] = acc;
      }
  };

  auto base_guard = chart_guard(spec);
  if (!opt.post_step) opt.post_step = base_guard;
  out.segment.stats = integrate_to_nodes(
      rhs, s, out.segment.ts,
      [&](int node, double, const VectorXd& st) {
        out.segment.xs[static_cast<size_t>(node)] = st.head(m);
        out.segment.vs[static_cast<size_t>(node)] = st.segment(m, m);
        MatrixXd E(m, c);
        for (int a = 0; a < c; ++a) E.col(a) = st.segment(2 * m + a * m, m);
        out.frames[static_cast<size_t>(node)] = E;
      },
      opt);
  return out;
}

}  // namespace finsler
