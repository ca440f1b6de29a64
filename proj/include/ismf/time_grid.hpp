#pragma once

#include <vector>

namespace ismf {

/// Step schedule that lands exactly on every requested stop time. Each
/// segment between consecutive stops is split into equal steps no longer
/// than max_dt.
struct StepSchedule {
  std::vector<double> stops;                 // increasing, last == t_end
  std::vector<int> steps_per_segment;
  std::vector<double> dt_per_segment;

  static StepSchedule build(double t_end, double max_dt, std::vector<double> snapshot_times);
  int total_steps() const;
};

}  // namespace ismf
