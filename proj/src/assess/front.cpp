#include "modae/assess/front.hpp"

#include <algorithm>
#include <cmath>

#include "modae/core/error.hpp"

namespace modae::assess {

std::vector<ObjectiveVector> nondominated(std::vector<ObjectiveVector> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // Ascending makespan (then secondary): keep strictly decreasing secondaries.
  std::vector<ObjectiveVector> out;
  for (const auto& p : points) {
    if (out.empty() || p.secondary < out.back().secondary) out.push_back(p);
  }
  return out;
}

double hypervolume(const std::vector<Point2>& points, Point2 ref) {
  std::vector<Point2> pts;
  for (const auto& p : points) {
    if (p.x < ref.x && p.y < ref.y) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  double area = 0;
  double ceiling = ref.y;
  for (const auto& p : pts) {
    if (p.y < ceiling) {
      area += (ref.x - p.x) * (ceiling - p.y);
      ceiling = p.y;
    }
  }
  return area;
}

double unary_hv_diff(const std::vector<ObjectiveVector>& approx,
                     const std::vector<ObjectiveVector>& true_front) {
  if (true_front.empty()) throw ContractViolation("true front must not be empty");
  auto [mlo, mhi] = std::minmax_element(true_front.begin(), true_front.end(),
                                        [](auto& a, auto& b) { return a.makespan < b.makespan; });
  auto [slo, shi] = std::minmax_element(true_front.begin(), true_front.end(),
                                        [](auto& a, auto& b) { return a.secondary < b.secondary; });
  const double m0 = static_cast<double>(mlo->makespan);
  const double s0 = static_cast<double>(slo->secondary);
  const double mw = mhi->makespan > mlo->makespan ? static_cast<double>(mhi->makespan) - m0 : 1.0;
  const double sw =
      shi->secondary > slo->secondary ? static_cast<double>(shi->secondary) - s0 : 1.0;
  auto scale = [&](const std::vector<ObjectiveVector>& v) {
    std::vector<Point2> out;
    for (const auto& p : v) {
      out.push_back({(static_cast<double>(p.makespan) - m0) / mw,
                     (static_cast<double>(p.secondary) - s0) / sw});
    }
    return out;
  };
  const Point2 ref{1.1, 1.1};
  return hypervolume(scale(nondominated(true_front)), ref) -
         hypervolume(scale(nondominated(approx)), ref);
}

double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw ContractViolation("wilcoxon needs two non-empty samples of equal length");
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  if (n == 0) return 1.0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });
  // Doubled ranks keep averaged ties integral.
  std::vector<long> rank2(n);
  double tie_term = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const long r2 = static_cast<long>(i + j + 2);  // 2 * average of ranks i+1..j+1
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = r2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long w2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) w2 += rank2[i];
  }

  if (n <= 20) {
    long total = 0;
    for (long r : rank2) total += r;
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1;
    long reach = 0;
    for (long r : rank2) {
      for (long s = reach; s >= 0; --s) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
      reach += r;
    }
    double lower = 0, upper = 0, all = 0;
    for (long s = 0; s <= total; ++s) {
      const double c = count[static_cast<std::size_t>(s)];
      all += c;
      if (s <= w2) lower += c;
      if (s >= w2) upper += c;
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / all);
  }

  const double nn = static_cast<double>(n);
  const double w = static_cast<double>(w2) / 2.0;
  const double mean = nn * (nn + 1) / 4.0;
  const double var = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_term / 48.0;
  if (var <= 0) return 1.0;
  const double z = std::max(0.0, std::abs(w - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace modae::assess
