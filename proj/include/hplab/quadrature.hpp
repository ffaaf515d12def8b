// Composite Gauss-Legendre rules with panels graded toward singular points.
#pragma once

#include <functional>
#include <vector>

namespace hplab {

struct QuadRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point Gauss-Legendre rule; cached per n.
const QuadRule& gauss_legendre(int n);

struct Panel {
  double a, b;
};

// Panels on [a, b] shrinking geometrically (ratio 1/2) toward every point of
// `singular` that lies in [a, b]; `levels` refinement levels per point.
std::vector<Panel> graded_panels(double a, double b, const std::vector<double>& singular, int levels);

// sum over panels of the n-point rule applied to f.
double integrate_panels(const std::function<double(double)>& f, const std::vector<Panel>& panels, int n);

}  // namespace hplab
