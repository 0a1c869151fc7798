#pragma once
// Analytical per-cycle overhead model T = ((E + A_succ) * af + A_exam) * N
// with per-unit weights fitted from measured runs.

#include <stdexcept>
#include <vector>

#include "actsim/metrics.hpp"

namespace actsim {

struct OverheadModel {
  double e_weight = 0.0;       // per node evaluation
  double a_succ_weight = 0.0;  // per activation operation
  double a_exam_weight = 0.0;  // per active-bit examination
  bool calibrated = false;

  double af = 0.0;  // activity factor of the configuration under prediction
  double n = 0.0;   // node count
};

struct CalibrationRun {
  MetricCounters counters;
  double wall_seconds = 0.0;
};

struct UncalibratedModel : std::logic_error {
  UncalibratedModel() : std::logic_error("overhead model not calibrated") {}
};

// Least-squares fit of the three weights from total counters vs wall time.
// Needs at least two runs; negative solutions clamp to zero.
OverheadModel calibrate_model(const std::vector<CalibrationRun>& runs);

// T = ((E + A_succ) * af + A_exam) * N. Throws UncalibratedModel.
double predict_cycle_cost(const OverheadModel& m);
double predict_cycle_cost(const OverheadModel& m, double af, double n);

}  // namespace actsim
