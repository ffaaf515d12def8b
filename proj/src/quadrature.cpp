#include "hplab/quadrature.hpp"

#include "hplab/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hplab {

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("quadrature order must be >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadRule r;
  // Nonnegative zeros in increasing order.
  auto zeros = boost::math::legendre_p_zeros<double>(n);
  auto weight = [n](double x) {
    double d = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * d * d);
  };
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
    if (*z == 0.0) continue;
    r.x.push_back(-*z);
    r.w.push_back(weight(*z));
  }
  for (double z : zeros) {
    r.x.push_back(z);
    r.w.push_back(weight(z));
  }
  return cache.emplace(n, std::move(r)).first->second;
}

std::vector<Panel> graded_panels(double a, double b, const std::vector<double>& singular, int levels) {
  std::vector<double> cuts{a, b};
  for (double s : singular) {
    if (s < a || s > b) continue;
    cuts.push_back(s);
    double left = s - a, right = b - s;
    for (int k = 1; k <= levels; ++k) {
      double h = std::ldexp(1.0, -k);
      if (left > 0) cuts.push_back(s - left * h);
      if (right > 0) cuts.push_back(s + right * h);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Panel> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back({cuts[i], cuts[i + 1]});
  return out;
}

double integrate_panels(const std::function<double(double)>& f, const std::vector<Panel>& panels, int n) {
  const auto& r = gauss_legendre(n);
  double total = 0;
  for (const auto& p : panels) {
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    double s = 0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    total += h * s;
  }
  return total;
}

}  // namespace hplab
