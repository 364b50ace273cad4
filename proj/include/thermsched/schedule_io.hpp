#pragma once

#include "thermsched/scheduler.hpp"

#include <json.hpp>

#include <iomanip>
#include <ostream>
#include <string>

namespace thermsched {

inline const char* to_string(CoreOrder order)
{
	switch (order) {
	case CoreOrder::PowerWeightDescending:
		return "power_weight_desc";
	case CoreOrder::FloorplanOrder:
		return "floorplan";
	}
	return "unknown";
}

inline CoreOrder parse_core_order(std::string_view name)
{
	if (name == "power_weight_desc")
		return CoreOrder::PowerWeightDescending;
	if (name == "floorplan")
		return CoreOrder::FloorplanOrder;
	throw InputError("unknown core order '" + std::string(name) + "'");
}

/// Machine-readable schedule document. Echoes the thermal parameters and
/// scheduler config so a run can be reproduced from the document alone.
inline nlohmann::ordered_json schedule_to_json(const Schedule& s, const Floorplan& fp, const ThermalParams& params,
					       const SchedulerConfig& cfg)
{
	using json = nlohmann::ordered_json;
	json doc;
	doc["config"] = {
		{"tl_C", cfg.tl},
		{"stcl", cfg.stcl},
		{"weight_factor", cfg.weight_factor},
		{"core_order", to_string(cfg.core_order)},
		{"thermal_params",
		 {{"k_silicon", params.k_silicon},
		  {"die_thickness", params.die_thickness},
		  {"r_vertical_per_area", params.r_vertical_per_area},
		  {"t_ambient", params.t_ambient}}},
	};
	json sessions = json::array();
	for (const auto& ts : s.sessions) {
		json cores = json::array();
		json temps = json::object();
		for (CoreIndex i : ts.cores) {
			cores.push_back(fp.core(i).id);
			temps[fp.core(i).id] = ts.result.temps[i];
		}
		sessions.push_back({
			{"cores", cores},
			{"duration_s", ts.duration},
			{"core_temperatures_C", temps},
			{"peak", {{"core", fp.core(ts.result.peak.core).id}, {"temperature_C", ts.result.peak.celsius}}},
		});
	}
	doc["sessions"] = std::move(sessions);
	doc["total_length_s"] = s.total_length;
	doc["simulation_effort_s"] = s.simulation_effort;
	doc["discarded_sessions"] = s.discarded_sessions;
	doc["max_temperature_C"] = s.max_temperature();
	json stage1 = json::object();
	for (CoreIndex i = 0; i < fp.size(); ++i)
		stage1[fp.core(i).id] = s.stage1_bcmt.at(i);
	doc["stage1_bcmt_C"] = std::move(stage1);
	json weights = json::object();
	for (CoreIndex i = 0; i < fp.size(); ++i)
		weights[fp.core(i).id] = s.final_weights.at(i);
	doc["final_weights"] = std::move(weights);
	return doc;
}

inline void write_schedule_text(std::ostream& out, const Schedule& s, const Floorplan& fp,
				const SchedulerConfig& cfg)
{
	out << "TL " << cfg.tl << " C, STCL " << cfg.stcl << "\n";
	out << std::fixed << std::setprecision(2);
	for (std::size_t k = 0; k < s.sessions.size(); ++k) {
		const auto& ts = s.sessions[k];
		out << "session " << k + 1 << " (" << ts.duration << " s, peak " << ts.result.peak.celsius << " C at "
		    << fp.core(ts.result.peak.core).id << "):";
		for (CoreIndex i : ts.cores)
			out << ' ' << fp.core(i).id;
		out << '\n';
	}
	out << "schedule length " << s.total_length << " s, simulation effort " << s.simulation_effort
	    << " s, discarded sessions " << s.discarded_sessions << ", max temperature " << s.max_temperature()
	    << " C\n";
	out.unsetf(std::ios::floatfield);
}

} // namespace thermsched
