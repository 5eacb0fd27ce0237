#include "ncfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "ncfem/error.hpp"

namespace ncfem {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

LineRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre needs n >= 1");
  LineRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double dp = legendre(n, x).second;
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const LineRule& line_rule(int degree) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<LineRule>> cache;
  std::lock_guard lock(mu);
  int n = std::max(1, degree / 2 + 1);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<LineRule>(gauss_legendre(n));
  return *slot;
}

const TriangleRule& triangle_rule(int degree) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<TriangleRule>> cache;
  std::lock_guard lock(mu);
  degree = std::max(degree, 0);
  auto& slot = cache[degree];
  if (!slot) {
    // x = u, y = v (1 - u), jacobian 1 - u raises the degree in u by one
    LineRule g = gauss_legendre((degree + 3) / 2);
    auto rule = std::make_unique<TriangleRule>();
    rule->degree = degree;
    for (size_t i = 0; i < g.points.size(); ++i) {
      for (size_t j = 0; j < g.points.size(); ++j) {
        double u = g.points[i], v = g.points[j];
        rule->points.emplace_back(u, v * (1.0 - u));
        rule->weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
      }
    }
    slot = std::move(rule);
  }
  return *slot;
}

}  // namespace ncfem
