#include "adpt/references.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "adpt/errors.hpp"

namespace adpt {

ReferenceSignal constant_reference(int order, const Vector& position) {
  const int m = static_cast<int>(position.size());
  ReferenceSample s{Vector::Zero(m * order), Vector::Zero(m)};
  s.state.head(m) = position;
  return ReferenceSignal(
      order, m, [s](double) { return s; }, true);
}

ReferenceSignal ramp_reference(int order, const Vector& start,
                               const Vector& rate) {
  if (start.size() != rate.size()) {
    throw DimensionError("ramp start and rate differ in length");
  }
  const int m = static_cast<int>(start.size());
  return ReferenceSignal(order, m, [=](double t) {
    ReferenceSample s{Vector::Zero(m * order), Vector::Zero(m)};
    s.state.head(m) = start + rate * t;
    if (order >= 2) {
      s.state.segment(m, m) = rate;
    } else {
      s.highest = rate;
    }
    return s;
  });
}

ReferenceSignal sine_reference(int order, const Vector& amplitude,
                               double omega, double phase) {
  const int m = static_cast<int>(amplitude.size());
  return ReferenceSignal(order, m, [=](double t) {
    ReferenceSample s{Vector(m * order), Vector(m)};
    double scale = 1.0;
    for (int k = 0; k <= order; ++k) {
      const double value =
          scale * std::sin(omega * t + phase + k * std::numbers::pi / 2.0);
      if (k < order) {
        s.state.segment(k * m, m) = amplitude * value;
      } else {
        s.highest = amplitude * value;
      }
      scale *= omega;
    }
    return s;
  });
}

ReferenceSignal circle_reference(double radius, double omega, double height) {
  return ReferenceSignal(2, 3, [=](double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    ReferenceSample r{Vector(6), Vector(3)};
    r.state << radius * c, radius * s, height, -radius * omega * s,
        radius * omega * c, 0.0;
    r.highest << -radius * omega * omega * c, -radius * omega * omega * s, 0.0;
    return r;
  });
}

ReferenceSignal step_sequence_reference(int order,
                                        std::vector<Vector> setpoints,
                                        double dwell) {
  if (setpoints.empty()) throw std::invalid_argument("no setpoints given");
  if (!(dwell > 0.0)) throw std::invalid_argument("dwell must be positive");
  const int m = static_cast<int>(setpoints.front().size());
  for (const auto& p : setpoints) {
    if (p.size() != m) throw DimensionError("setpoints differ in length");
  }
  const bool constant = setpoints.size() == 1;
  return ReferenceSignal(
      order, m,
      [order, m, dwell, pts = std::move(setpoints)](double t) {
        const auto last = static_cast<double>(pts.size() - 1);
        const auto index = static_cast<std::size_t>(
            std::clamp(std::floor(t / dwell), 0.0, last));
        ReferenceSample s{Vector::Zero(m * order), Vector::Zero(m)};
        s.state.head(m) = pts[index];
        return s;
      },
      constant);
}

}  // namespace adpt
