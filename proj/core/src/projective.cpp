#include "aqe/projective/projective.hpp"

#include <algorithm>
#include <cmath>

#include "aqe/error.hpp"
#include "aqe/geometry/curvature.hpp"
#include "json.hpp"

namespace aqe {

namespace {

std::vector<ScalarExpr> gradient(const ScalarExpr& g) {
  std::vector<ScalarExpr> dg;
  for (std::size_t i = 0; i < g.nvars(); ++i) dg.push_back(g.differentiate(i));
  return dg;
}

Rational distinguished_eigenvalue(std::size_t m) {
  Rational r(-1, static_cast<long>(m - 1));
  r.canonicalize();
  return r;
}

}  // namespace

ProjectiveChange ProjectiveChange::from_form(std::vector<ScalarExpr> omega) {
  ProjectiveChange c;
  c.omega = std::move(omega);
  c.strong = holds(closedness(c.omega));
  return c;
}

ProjectiveChange ProjectiveChange::from_potential(const ScalarExpr& g) {
  ProjectiveChange c;
  c.omega = gradient(g);
  c.potential = g;
  c.strong = true;
  return c;
}

Verdict closedness(std::span<const ScalarExpr> omega) {
  Verdict v = Verdict::kZero;
  for (std::size_t i = 0; i < omega.size(); ++i)
    for (std::size_t j = i + 1; j < omega.size(); ++j) {
      v = combine(v, is_identically_zero(omega[j].differentiate(i) - omega[i].differentiate(j)));
      if (v == Verdict::kNonzero) return v;
    }
  return v;
}

bool is_strong(const ProjectiveChange& change) { return holds(closedness(change.omega)); }

AffineManifold deform(const AffineManifold& m, const ProjectiveChange& change) {
  const std::size_t n = m.dim();
  if (change.omega.size() != n) throw PreconditionError("1-form has the wrong number of components");
  for (const auto& w : change.omega) {
    if (w.nvars() != n) throw PreconditionError("1-form lives on a chart of the wrong dimension");
  }
  if (change.potential) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!holds(is_identically_zero(change.potential->differentiate(i) - change.omega[i]))) {
        throw PreconditionError("potential does not match the 1-form");
      }
    }
  }
  std::vector<ScalarExpr> gamma = m.christoffel_grid();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      gamma[(i * n + j) * n + i] += change.omega[j];
      gamma[(i * n + j) * n + j] += change.omega[i];
    }
  return AffineManifold(m.coords(), std::move(gamma), m.excluded());
}

AffineManifold deform(const AffineManifold& m, const ScalarExpr& g) {
  return deform(m, ProjectiveChange::from_potential(g));
}

TensorField ricci_transform_residual(const AffineManifold& m, const ScalarExpr& g) {
  const std::size_t n = m.dim();
  const auto deformed = deform(m, g);
  const auto before = ricci(m).symmetric;
  const auto after = ricci(deformed).symmetric;
  const auto h = hessian(m, g);
  const auto dg = gradient(g);
  const Rational scale(static_cast<long>(n - 1));
  TensorField r(n, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      r(i, j) = after(i, j) - before(i, j) + (h(i, j) - dg[i] * dg[j]).scaled(scale);
    }
  return r;
}

LiouvilleReport liouville_check(const AffineManifold& m, const ScalarExpr& g) {
  const std::size_t n = m.dim();
  const auto deformed = deform(m, g);
  const auto before = ricci(m).symmetric;
  const auto after = ricci(deformed).symmetric;
  const auto h = hessian(m, g);
  const auto dg = gradient(g);
  TensorField cond(n, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cond(i, j) = h(i, j) - dg[i] * dg[j];
  return {(after - before).is_zero(), cond.is_zero()};
}

StrongFlatnessReport strong_flatness_test(const AffineManifold& m, std::span<const Rational> basepoint) {
  StrongFlatnessReport report;
  report.space = solution_dimension(m, distinguished_eigenvalue(m.dim()), basepoint);
  report.strongly_flat = report.space.dim == m.dim() + 1;
  if (m.dim() == 2) {
    const auto rho = ricci(m).rho;
    report.symmetric_criterion =
        holds(is_totally_symmetric(rho)) && holds(is_totally_symmetric(covariant_derivative(m, rho)));
  }
  return report;
}

std::vector<FloatPoint> square_grid(std::span<const double> center, double radius, int k) {
  const std::size_t m = center.size();
  std::vector<FloatPoint> grid;
  const int side = 2 * k + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= static_cast<std::size_t>(side);
  for (std::size_t idx = 0; idx < total; ++idx) {
    FloatPoint p(center.begin(), center.end());
    std::size_t rest = idx;
    for (std::size_t i = 0; i < m; ++i) {
      const int step = static_cast<int>(rest % side) - k;
      rest /= side;
      p[i] += k == 0 ? 0.0 : radius * step / k;
    }
    grid.push_back(std::move(p));
  }
  return grid;
}

double default_chart_radius(const AffineManifold& m, std::span<const double> basepoint) {
  double distance = 2.0;
  const int steps = 2000;
  FloatPoint x(basepoint.begin(), basepoint.end());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (double dir : {-1.0, 1.0}) {
      for (int s = 1; s <= steps; ++s) {
        const double t = 2.0 * s / steps;
        if (t >= distance) break;
        x[i] = basepoint[i] + dir * t;
        if (m.on_excluded_locus(std::span<const double>(x), 1e-9)) {
          distance = t;
          break;
        }
      }
      x[i] = basepoint[i];
    }
    // Sign changes between samples also count.
    if (!m.excluded().empty()) {
      for (const auto& e : m.excluded()) {
        const double v0 = e.evaluate(basepoint);
        for (double dir : {-1.0, 1.0}) {
          for (int s = 1; s <= steps; ++s) {
            const double t = 2.0 * s / steps;
            if (t >= distance) break;
            x[i] = basepoint[i] + dir * t;
            double v = 0.0;
            try {
              v = e.evaluate(std::span<const double>(x));
            } catch (const DomainError&) {
              v = 0.0;
            }
            if ((v > 0) != (v0 > 0) || v == 0.0) {
              distance = t;
              break;
            }
          }
          x[i] = basepoint[i];
        }
      }
    }
  }
  return std::min(distance / 4.0, 0.5);
}

FlatChart flat_chart(const AffineManifold& m, std::span<const Rational> basepoint, std::span<const FloatPoint> grid,
                     double radius) {
  const std::size_t n = m.dim();
  const Rational mu = distinguished_eigenvalue(n);
  const auto space = solution_dimension(m, mu, basepoint);
  if (space.dim != n + 1) {
    throw PreconditionError("manifold is not strongly projectively flat at the basepoint (dim E(mu_m) = " +
                            std::to_string(space.dim) + ")");
  }
  FlatChart chart;
  for (const auto& x : basepoint) chart.basepoint.push_back(to_double(x));
  chart.radius = radius > 0.0 ? radius : default_chart_radius(m, chart.basepoint);
  for (std::size_t c = 0; c <= n; ++c) {
    std::vector<Rational> e(n + 1, Rational(0));
    e[c] = 1;
    chart.basis.push_back(std::move(e));
  }
  const JetTransport transport(m, mu);
  for (const auto& q : grid) {
    if (q.size() != n) throw PreconditionError("grid point has the wrong number of coordinates");
    const FloatPoint path[2] = {chart.basepoint, q};
    std::vector<std::vector<double>> jets;
    for (std::size_t c = 0; c <= n; ++c) {
      std::vector<double> u0(n + 1, 0.0);
      u0[c] = 1.0;
      jets.push_back(transport.transport(path, u0));
    }
    const double phi0 = jets[0][0];
    if (!(phi0 > 1e-8)) throw DomainError("phi_0 vanishes on the grid; shrink the grid");
    FloatPoint z(n);
    std::vector<double> jac(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = jets[i + 1][0];
      z[i] = phi / phi0;
      for (std::size_t j = 0; j < n; ++j) {
        jac[i * n + j] = (jets[i + 1][j + 1] * phi0 - phi * jets[0][j + 1]) / (phi0 * phi0);
      }
    }
    chart.points.push_back(q);
    chart.z.push_back(std::move(z));
    chart.jacobian.push_back(std::move(jac));
  }
  return chart;
}

std::string flat_chart_json(const FlatChart& chart, int indent) {
  nlohmann::ordered_json doc;
  doc["basepoint"] = chart.basepoint;
  doc["points"] = chart.points;
  doc["z"] = chart.z;
  return doc.dump(indent);
}

namespace {

// Geodesic from P with initial velocity v together with the jet matrix of the flat-chart
// basis; returns the z-images at evenly spaced times.
std::vector<FloatPoint> geodesic_images(const AffineManifold& m, const JetTransport& transport,
                                        std::span<const double> p, std::span<const double> v, double horizon) {
  const std::size_t n = m.dim();
  const std::size_t q = n + 1;
  const std::size_t size = 2 * n + q * q;
  std::vector<double> a;
  auto rhs = [&](const std::vector<double>& s, std::vector<double>& ds) {
    std::span<const double> x(s.data(), n);
    std::span<const double> xd(s.data() + n, n);
    transport.evaluate(x, a);
    ds.assign(size, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      ds[k] = xd[k];
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc += a[i * q * q + (j + 1) * q + k + 1] * xd[i] * xd[j];
      ds[n + k] = -acc;
    }
    for (std::size_t r = 0; r < q; ++r)
      for (std::size_t c = 0; c < q; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t t = 0; t < q; ++t) acc += xd[i] * a[i * q * q + r * q + t] * s[2 * n + t * q + c];
        ds[2 * n + r * q + c] = acc;
      }
  };
  std::vector<double> s(size, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = p[k];
    s[n + k] = v[k];
  }
  for (std::size_t r = 0; r < q; ++r) s[2 * n + r * q + r] = 1.0;
  const int steps = 2000;
  const int every = steps / 20;
  const double h = horizon / steps;
  std::vector<double> k1, k2, k3, k4, tmp(size);
  std::vector<FloatPoint> images;
  auto record = [&] {
    const double phi0 = s[2 * n];
    if (!(phi0 > 1e-6)) throw DomainError("geodesic left the chart");
    FloatPoint z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = s[2 * n + i + 1] / phi0;
    images.push_back(std::move(z));
  };
  record();
  for (int step = 1; step <= steps; ++step) {
    rhs(s, k1);
    for (std::size_t t = 0; t < size; ++t) tmp[t] = s[t] + 0.5 * h * k1[t];
    rhs(tmp, k2);
    for (std::size_t t = 0; t < size; ++t) tmp[t] = s[t] + 0.5 * h * k2[t];
    rhs(tmp, k3);
    for (std::size_t t = 0; t < size; ++t) tmp[t] = s[t] + h * k3[t];
    rhs(tmp, k4);
    for (std::size_t t = 0; t < size; ++t) s[t] += h / 6.0 * (k1[t] + 2.0 * k2[t] + 2.0 * k3[t] + k4[t]);
    for (double x : s)
      if (!std::isfinite(x)) throw DomainError("geodesic blew up");
    if (m.on_excluded_locus(std::span<const double>(s.data(), n), 1e-9)) throw DomainError("geodesic met the excluded locus");
    if (step % every == 0) record();
  }
  return images;
}

}  // namespace

double geodesic_straightness(const AffineManifold& m, const FlatChart& chart, int n_geodesics, std::uint64_t seed) {
  const std::size_t n = m.dim();
  const JetTransport transport(m, distinguished_eigenvalue(n));
  Sampler sampler(seed);
  double worst = 0.0;
  for (int g = 0; g < n_geodesics; ++g) {
    FloatPoint v(n);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& c : v) {
        c = sampler.uniform(-1.0, 1.0);
        norm += c * c;
      }
    } while (norm < 1e-4);
    for (auto& c : v) c /= std::sqrt(norm);
    double horizon = chart.radius > 0.0 ? chart.radius : 0.25;
    std::vector<FloatPoint> images;
    for (int attempt = 0;; ++attempt) {
      try {
        images = geodesic_images(m, transport, chart.basepoint, v, horizon);
        break;
      } catch (const DomainError&) {
        if (attempt >= 6) throw;
        horizon *= 0.5;
      }
    }
    const auto& first = images.front();
    const auto& last = images.back();
    FloatPoint chord(n);
    double length = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      chord[i] = last[i] - first[i];
      length += chord[i] * chord[i];
    }
    length = std::sqrt(length);
    if (length == 0.0) continue;
    for (const auto& z : images) {
      double along = 0.0;
      for (std::size_t i = 0; i < n; ++i) along += (z[i] - first[i]) * chord[i] / length;
      double off = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = z[i] - first[i] - along * chord[i] / length;
        off += d * d;
      }
      worst = std::max(worst, std::sqrt(off) / length);
    }
  }
  return worst;
}

GaugeResult ricci_flat_gauge(const AffineManifold& m, const ScalarExpr& g) {
  const Rational mu = distinguished_eigenvalue(m.dim());
  if (!holds(apply_qe_operator(m, mu, ScalarExpr::exp(-g)).is_zero())) {
    throw PreconditionError("exp(-g) does not solve the equation at the distinguished eigenvalue");
  }
  auto deformed = deform(m, g);
  auto rho_s = ricci(deformed).symmetric;
  const Verdict v = rho_s.is_zero();
  return {std::move(deformed), std::move(rho_s), v};
}

double ricci_flat_gauge_residual(const AffineManifold& m, std::span<const double> basepoint,
                                 std::span<const double> u0, std::span<const FloatPoint> samples) {
  const std::size_t n = m.dim();
  const Rational mu = distinguished_eigenvalue(n);
  const double muf = to_double(mu);
  const JetTransport transport(m, mu);
  const auto rho_s = ricci(m).symmetric;
  // dgamma[((l*n + i)*n + j)*n + k] = d_l Gamma_ij^k
  std::vector<ScalarExpr> dgamma(n * n * n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) dgamma[((l * n + i) * n + j) * n + k] = m.christoffel(i, j, k).differentiate(l);
  double worst = 0.0;
  for (const auto& q : samples) {
    const FloatPoint path[2] = {FloatPoint(basepoint.begin(), basepoint.end()), q};
    const auto u = transport.transport(path, u0);
    const double f = u[0];
    if (!(f > 0.0)) throw DomainError("solution is not positive at a sample point");
    auto gam = [&](std::size_t i, std::size_t j, std::size_t k) { return m.christoffel(i, j, k).evaluate(q); };
    std::vector<double> G(n * n * n), dG(n * n * n * n), dg(n), ddg(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) G[(i * n + j) * n + k] = gam(i, j, k);
    for (std::size_t t = 0; t < dG.size(); ++t) dG[t] = dgamma[t].is_zero_literal() ? 0.0 : dgamma[t].evaluate(q);
    for (std::size_t l = 0; l < n; ++l) dg[l] = -u[l + 1] / f;
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) {
        double second = muf * rho_s(l, j).evaluate(q) * f;
        for (std::size_t k = 0; k < n; ++k) second += G[(l * n + j) * n + k] * u[k + 1];
        ddg[l * n + j] = -second / f + u[l + 1] * u[j + 1] / (f * f);
      }
    auto gt = [&](std::size_t i, std::size_t j, std::size_t k) {
      return G[(i * n + j) * n + k] + (i == k ? dg[j] : 0.0) + (j == k ? dg[i] : 0.0);
    };
    auto dgt = [&](std::size_t l, std::size_t i, std::size_t j, std::size_t k) {
      return dG[((l * n + i) * n + j) * n + k] + (i == k ? ddg[l * n + j] : 0.0) + (j == k ? ddg[l * n + i] : 0.0);
    };
    std::vector<double> rho(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          v += dgt(i, j, k, i) - dgt(j, i, k, i);
          for (std::size_t p = 0; p < n; ++p) v += gt(i, p, i) * gt(j, k, p) - gt(j, p, i) * gt(i, k, p);
        }
        rho[j * n + k] = v;
      }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(0.5 * (rho[j * n + k] + rho[k * n + j])));
  }
  return worst;
}

}  // namespace aqe
