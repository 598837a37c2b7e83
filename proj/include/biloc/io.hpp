#ifndef BILOC_IO_HPP
#define BILOC_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "biloc/optimize.hpp"
#include "biloc/oracle.hpp"

namespace biloc {

using json = nlohmann::json;

// Complex matrices as row-major nested arrays of [re, im] pairs; the single
// serialization used by every file schema.
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);

// File schemas: biloc-scenario/1, biloc-state/1, biloc-observables/1,
// biloc-report/1, biloc-trace/1.
json scenario_to_json(const Scenario& s);
ScenarioPtr scenario_from_json(const json& j);

json state_to_json(const NetworkState& st);
NetworkState state_from_json(const json& j, ScenarioPtr scenario = nullptr);

json observables_to_json(const ObservableSet& obs);
ObservableSet observables_from_json(const json& j, ScenarioPtr scenario);

json report_to_json(const BilocalReport& rep);

json trace_to_json(const OptimizationTrace& tr, std::uint64_t seed);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

std::string sweep_csv(const std::vector<SweepRow>& rows);  // header param,S_best,converged,iters
std::string probability_csv(const ProbabilityTable& t);    // header x,y,z,a,b,c,p

void save_text_file(const std::string& path, const std::string& text);

}  // namespace biloc

#endif
