#pragma once

#include <json.hpp>

#include "actsim/metrics.hpp"
#include "actsim/metrics_model.hpp"
#include "actsim/passes.hpp"

namespace actsim {

nlohmann::json metrics_json(const MetricCounters& m, uint64_t node_count,
                            size_t supernodes);
nlohmann::json pass_report_json(const PassReport& r);
nlohmann::json model_json(const OverheadModel& m);

}  // namespace actsim
