#pragma once

#include <vector>

namespace windplan {

/// Natural cubic interpolating spline on a strictly increasing knot grid.
/// Second derivatives vanish at both ends; with two knots this degenerates
/// to the straight chord.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> knots, std::vector<double> values);

  double eval(double s) const;
  double deriv(double s) const;
  double deriv2(double s) const;

  double front() const { return s_.front(); }
  double back() const { return s_.back(); }

 private:
  std::size_t interval(double s) const;
  std::vector<double> s_;
  std::vector<double> f_;
  std::vector<double> m_;  // second derivatives at knots
};

}  // namespace windplan
