#pragma once

#include <cmath>
#include <complex>

namespace ekc {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  void merge(const CompensatedSum& o) {
    add(o.sum);
    add(o.comp);
  }
  double value() const { return sum + comp; }
};

struct ComplexCompensatedSum {
  CompensatedSum re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLog2 = 0.69314718055994530941723212145817657;

}  // namespace ekc
