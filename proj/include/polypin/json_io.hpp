#pragma once

#include "polypin/free_energy.hpp"
#include "polypin/regime.hpp"
#include "polypin/renewal.hpp"
#include "polypin/srw_kernel.hpp"

#include <json.hpp>

#include <iosfwd>

namespace polypin {

nlohmann::ordered_json to_json(const ScalingPoint& p);
nlohmann::ordered_json to_json(const Classification& c);
nlohmann::ordered_json to_json(const Prediction& p);
nlohmann::ordered_json to_json(const FreeEnergyResult& r);
nlohmann::ordered_json to_json(const RenewalMoments& m);
nlohmann::ordered_json to_json(const ProfileReport& r);
nlohmann::ordered_json to_json(const BoundReport& r);
nlohmann::ordered_json to_json(const ExperimentReport& r);

/// CSV summary "name,statistic,threshold,verdict", one row per criterion.
void write_criteria_csv(std::ostream& os, const ExperimentReport& r);

/// Non-finite doubles become null (JSON has no inf/nan).
nlohmann::ordered_json num(double x);

} // namespace polypin
