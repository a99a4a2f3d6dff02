#pragma once

#include <cmath>
#include <complex>
#include <vector>

inline std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  return out;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool close(std::complex<double> a, std::complex<double> b, double tol) { return std::abs(a - b) <= tol; }
