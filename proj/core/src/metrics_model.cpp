#include "actsim/metrics_model.hpp"

#include <array>
#include <cmath>

namespace actsim {

namespace {

// Solves the 3x3 system A x = b by Gaussian elimination with partial
// pivoting; returns false when singular (falls back to a ratio fit).
bool solve3(std::array<std::array<double, 3>, 3>& a, std::array<double, 3>& b,
            std::array<double, 3>& x) {
  for (int col = 0; col < 3; col++) {
    int piv = col;
    for (int r = col + 1; r < 3; r++)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 3; r++) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; c++) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; r--) {
    double acc = b[r];
    for (int c = r + 1; c < 3; c++) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return true;
}

}  // namespace

OverheadModel calibrate_model(const std::vector<CalibrationRun>& runs) {
  if (runs.size() < 2)
    throw std::invalid_argument("model calibration needs at least two runs");
  // Normal equations for wall ~ e*evaluated + a*activations + x*examinations.
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> atb{};
  for (const auto& r : runs) {
    std::array<double, 3> row = {(double)r.counters.evaluated_nodes,
                                 (double)r.counters.activations,
                                 (double)r.counters.examinations};
    for (int i = 0; i < 3; i++) {
      for (int j = 0; j < 3; j++) ata[i][j] += row[i] * row[j];
      atb[i] += row[i] * r.wall_seconds;
    }
  }
  // Ridge term keeps near-collinear counter mixes solvable.
  for (int i = 0; i < 3; i++) ata[i][i] += 1e-9 * (ata[i][i] + 1.0);

  OverheadModel m;
  std::array<double, 3> x{};
  if (solve3(ata, atb, x)) {
    m.e_weight = std::max(0.0, x[0]);
    m.a_succ_weight = std::max(0.0, x[1]);
    m.a_exam_weight = std::max(0.0, x[2]);
  } else {
    // Degenerate counters: attribute everything to evaluation.
    double num = 0, den = 0;
    for (const auto& r : runs) {
      num += r.wall_seconds * (double)r.counters.evaluated_nodes;
      den += (double)r.counters.evaluated_nodes * (double)r.counters.evaluated_nodes;
    }
    m.e_weight = den > 0 ? num / den : 0.0;
  }
  m.calibrated = true;
  return m;
}

double predict_cycle_cost(const OverheadModel& m, double af, double n) {
  if (!m.calibrated) throw UncalibratedModel();
  return ((m.e_weight + m.a_succ_weight) * af + m.a_exam_weight) * n;
}

double predict_cycle_cost(const OverheadModel& m) {
  return predict_cycle_cost(m, m.af, m.n);
}

}  // namespace actsim
