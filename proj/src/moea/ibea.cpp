#include <algorithm>
#include <cmath>

#include "modae/core/error.hpp"
#include "modae/moea/moea.hpp"

namespace modae::moea {

namespace {

constexpr double kRef = 2.0;

std::vector<Point> scaled(const std::vector<Point>& pts) {
  std::vector<Point> out(pts);
  for (int k = 0; k < 2; ++k) {
    double lo = pts.empty() ? 0 : pts[0][k];
    double hi = lo;
    for (const auto& p : pts) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
    }
    for (auto& p : out) p[k] = hi > lo ? (p[k] - lo) / (hi - lo) : 0.0;
  }
  return out;
}

// Area dominated by y but not by x, inside [.., kRef]^2.
double indicator(const Point& x, const Point& y) {
  const double area_y = (kRef - y[0]) * (kRef - y[1]);
  const double both = (kRef - std::max(x[0], y[0])) * (kRef - std::max(x[1], y[1]));
  return area_y - both;
}

struct Matrix {
  std::size_t n;
  std::vector<double> e;  // e[y*n+x] = exp(-I(y,x) / (c*kappa))
};

Matrix weights(const std::vector<Point>& pts, double kappa) {
  const auto s = scaled(pts);
  const std::size_t n = s.size();
  std::vector<double> ind(n * n, 0.0);
  double c = 0;
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      ind[y * n + x] = indicator(s[y], s[x]);
      c = std::max(c, std::abs(ind[y * n + x]));
    }
  }
  Matrix m{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      if (x == y) continue;
      m.e[y * n + x] = c > 0 ? std::exp(-ind[y * n + x] / (c * kappa)) : 1.0;
    }
  }
  return m;
}

}  // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.makespan <= b.makespan && a.secondary <= b.secondary && a != b;
}

std::vector<double> ibea_fitness(const std::vector<Point>& points, double kappa) {
  if (!(kappa > 0)) throw ContractViolation("kappa must be positive");
  const auto m = weights(points, kappa);
  std::vector<double> f(m.n, 0.0);
  for (std::size_t x = 0; x < m.n; ++x) {
    for (std::size_t y = 0; y < m.n; ++y) {
      if (y != x) f[x] -= m.e[y * m.n + x];
    }
  }
  return f;
}

std::vector<std::size_t> ibea_select(const std::vector<Point>& points, double kappa,
                                     std::size_t out_size, bool preserve_extremes) {
  if (out_size > points.size()) throw ContractViolation("ibea_select: out-size exceeds population");
  if (!(kappa > 0)) throw ContractViolation("kappa must be positive");
  const auto m = weights(points, kappa);
  const std::size_t n = m.n;
  std::vector<double> f(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (y != x) f[x] -= m.e[y * n + x];
    }
  }
  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  auto best_on = [&](int k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      if (best == n || points[i][k] < points[best][k] ||
          (points[i][k] == points[best][k] && points[i][1 - k] < points[best][1 - k])) {
        best = i;
      }
    }
    return best;
  };
  while (remaining > out_size) {
    std::size_t keep0 = n, keep1 = n;
    if (preserve_extremes && out_size >= 2) {
      keep0 = best_on(0);
      keep1 = best_on(1);
    }
    std::size_t worst = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i] || i == keep0 || i == keep1) continue;
      // Ties go to the later index, so earlier entries survive.
      if (worst == n || f[i] <= f[worst]) worst = i;
    }
    alive[worst] = false;
    --remaining;
    for (std::size_t x = 0; x < n; ++x) {
      if (alive[x]) f[x] += m.e[worst * n + x];
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive[i]) kept.push_back(i);
  }
  return kept;
}

std::vector<std::size_t> ibea_select(const std::vector<ObjectiveVector>& points, double kappa,
                                     std::size_t out_size, bool preserve_extremes) {
  std::vector<Point> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    pts.push_back({static_cast<double>(p.makespan), static_cast<double>(p.secondary)});
  }
  return ibea_select(pts, kappa, out_size, preserve_extremes);
}

void Bounds::validate() const {
  if (!(makespan_min < makespan_max) || !(secondary_min < secondary_max)) {
    throw Error("bounds need min < max on both objectives");
  }
}

double f_alpha(const ObjectiveVector& v, double alpha, const Bounds& b) {
  b.validate();
  auto unit = [](double x, double lo, double hi) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); };
  const double m = unit(static_cast<double>(v.makespan), b.makespan_min, b.makespan_max);
  const double s = unit(static_cast<double>(v.secondary), b.secondary_min, b.secondary_max);
  return alpha * m + (1 - alpha) * s;
}

}  // namespace modae::moea
