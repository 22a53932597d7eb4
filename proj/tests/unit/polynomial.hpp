#pragma once

// Small exact polynomial arithmetic used as an integration oracle.

#include <cmath>
#include <vector>

namespace softfem::test {

struct Poly {
  std::vector<double> c; // c[k] x^k

  [[nodiscard]] double operator()(double x) const {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }
  [[nodiscard]] Poly derivative() const {
    Poly d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(k * c[k]);
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }
  [[nodiscard]] double integral(double a, double b) const {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      s += c[k] * (std::pow(b, double(k + 1)) - std::pow(a, double(k + 1))) / double(k + 1);
    return s;
  }
};

inline Poly operator*(const Poly& p, const Poly& q) {
  Poly r;
  r.c.assign(p.c.size() + q.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i)
    for (std::size_t j = 0; j < q.c.size(); ++j) r.c[i + j] += p.c[i] * q.c[j];
  return r;
}

} // namespace softfem::test
