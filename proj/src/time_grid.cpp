#include "ismf/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "ismf/grid.hpp"

namespace ismf {

StepSchedule StepSchedule::build(double t_end, double max_dt, std::vector<double> snapshot_times) {
  if (!(t_end > 0.0)) throw InvalidArgument("schedule: t_end must be positive");
  if (!(max_dt > 0.0)) throw InvalidArgument("schedule: dt must be positive");
  StepSchedule s;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  for (double t : snapshot_times) {
    if (t > 0.0 && t < t_end && (s.stops.empty() || t > s.stops.back() + 1e-12 * t_end)) s.stops.push_back(t);
  }
  s.stops.push_back(t_end);
  double prev = 0.0;
  for (double stop : s.stops) {
    const double span = stop - prev;
    const int n = std::max(1, static_cast<int>(std::ceil(span / max_dt - 1e-9)));
    s.steps_per_segment.push_back(n);
    s.dt_per_segment.push_back(span / n);
    prev = stop;
  }
  return s;
}

int StepSchedule::total_steps() const {
  int n = 0;
  for (int k : steps_per_segment) n += k;
  return n;
}

}  // namespace ismf
