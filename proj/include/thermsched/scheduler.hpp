#pragma once

#include "thermsched/floorplan.hpp"
#include "thermsched/thermal_model.hpp"
#include "thermsched/thermal_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermsched {

/// Margin added to the hottest stage-1 temperature when suggesting a TL.
inline constexpr double kTemperatureTolerance = 1e-6;

enum class CoreOrder {
	/// Descending P(i) * W(i), ties broken by core id.
	PowerWeightDescending,
	/// Floorplan file order.
	FloorplanOrder,
};

struct SchedulerConfig {
	double tl = 0.0;   // deg C
	double stcl = 0.0; // K W
	double weight_factor = 1.1;
	CoreOrder core_order = CoreOrder::PowerWeightDescending;

	void validate(const ThermalParams& params) const
	{
		if (!(tl > params.t_ambient) || !std::isfinite(tl))
			throw InputError("TL must be finite and above ambient (" + detail::format_number(params.t_ambient) + " C)");
		// A finite limit is what eventually isolates repeat violators.
		if (!(stcl > 0.0) || !std::isfinite(stcl))
			throw InputError("STCL must be finite and > 0");
		if (!(weight_factor > 1.0) || !std::isfinite(weight_factor))
			throw InputError("weight factor must be finite and > 1");
	}
};

struct TestSession {
	CoreSet cores;
	double duration = 0.0;
	SimulationResult result;
};

struct Schedule {
	std::vector<TestSession> sessions;
	double total_length = 0.0;       // s
	double simulation_effort = 0.0;  // s, stage-1 runs excluded
	std::vector<double> stage1_bcmt; // deg C, per core
	std::size_t discarded_sessions = 0;
	std::vector<double> final_weights;

	double max_temperature() const
	{
		double t = -std::numeric_limits<double>::infinity();
		for (const auto& s : sessions)
			t = std::max(t, s.result.peak.celsius);
		return t;
	}
};

struct CoreViolation {
	CoreIndex core;
	double bcmt;
};

/// Stage-1 failure: some cores overheat even when tested alone. Lists every
/// offender; the remedy (redesign the core's test or raise TL) is manual.
class ThermalViolationError : public std::runtime_error {
public:
	ThermalViolationError(std::vector<CoreViolation> violations, double suggested_tl, std::string message)
		: std::runtime_error(std::move(message))
		, violations_(std::move(violations))
		, suggested_tl_(suggested_tl)
	{
	}

	const std::vector<CoreViolation>& violations() const noexcept { return violations_; }
	double suggested_tl() const noexcept { return suggested_tl_; }

private:
	std::vector<CoreViolation> violations_;
	double suggested_tl_;
};

/// Simulates every core as a singleton session and returns BCMT per core.
/// Throws ThermalViolationError if any BCMT >= tl.
inline std::vector<double> screen_cores(const Floorplan& fp, const PowerProfile& power, const ThermalParams& params,
					double tl)
{
	std::vector<double> bcmt(fp.size());
	std::vector<CoreViolation> bad;
	double hottest = -std::numeric_limits<double>::infinity();
	for (CoreIndex i = 0; i < fp.size(); ++i) {
		const auto r = simulate_session(CoreSet{i}, fp, power, params);
		bcmt[i] = r.peak.celsius;
		hottest = std::max(hottest, bcmt[i]);
		if (bcmt[i] >= tl)
			bad.push_back({i, bcmt[i]});
	}
	if (!bad.empty()) {
		const double suggested = hottest + kTemperatureTolerance;
		std::ostringstream msg;
		msg << "core-level thermal violation at TL " << tl << " C:";
		for (const auto& v : bad)
			msg << "\n  core '" << fp.core(v.core).id << "' BCMT " << v.bcmt << " C";
		msg << "\nfix the core-level violation or raise TL to at least " << suggested << " C";
		throw ThermalViolationError(std::move(bad), suggested, msg.str());
	}
	return bcmt;
}

/// Order in which build_session tries the available cores.
inline std::vector<CoreIndex> ordered_cores(const CoreSet& available, const Weights& weights, const Floorplan& fp,
					    const PowerProfile& power, CoreOrder order)
{
	std::vector<CoreIndex> cores(available.begin(), available.end());
	if (order == CoreOrder::PowerWeightDescending) {
		std::sort(cores.begin(), cores.end(), [&](CoreIndex a, CoreIndex b) {
			const double ka = power.power(a) * weights[a];
			const double kb = power.power(b) * weights[b];
			if (ka != kb)
				return ka > kb;
			return fp.core(a).id < fp.core(b).id;
		});
	}
	return cores;
}

/// Greedy STC-bounded packing. Each candidate is tried against the enlarged
/// session (every member's R_eq recomputed) and kept iff STC <= stcl. The
/// first candidate is always admitted so that a core whose singleton STC
/// exceeds the limit still gets scheduled.
inline CoreSet build_session(const CoreSet& available, const Weights& weights, double stcl, const Floorplan& fp,
			     const PowerProfile& power, const ThermalParams& params,
			     CoreOrder order = CoreOrder::PowerWeightDescending)
{
	CoreSet session;
	for (CoreIndex c : ordered_cores(available, weights, fp, power, order)) {
		if (session.empty()) {
			session.insert(c);
			continue;
		}
		CoreSet candidate = session;
		candidate.insert(c);
		if (session_stc(candidate, power, weights, fp, params) <= stcl)
			session = std::move(candidate);
	}
	return session;
}

/// Screening, then repeated pack / simulate / validate passes over the
/// remaining cores until every core sits in a thermal-safe session. Members
/// of a discarded session that reached TL get their weight multiplied by
/// cfg.weight_factor.
inline Schedule generate_schedule(const Floorplan& fp, const PowerProfile& power, const ThermalParams& params,
				  const SchedulerConfig& cfg)
{
	params.validate();
	cfg.validate(params);

	Schedule schedule;
	schedule.stage1_bcmt = screen_cores(fp, power, params, cfg.tl);

	Weights weights(fp.size());
	CoreSet remaining;
	for (CoreIndex i = 0; i < fp.size(); ++i)
		remaining.insert(i);

	while (!remaining.empty()) {
		CoreSet session = build_session(remaining, weights, cfg.stcl, fp, power, params, cfg.core_order);
		SimulationResult result = simulate_session(session, fp, power, params);
		schedule.simulation_effort += result.simulated_duration;

		bool valid = true;
		for (CoreIndex i : session) {
			if (result.temps[i] >= cfg.tl) {
				weights.scale(i, cfg.weight_factor);
				valid = false;
			}
		}
		if (!valid) {
			++schedule.discarded_sessions;
			continue;
		}
		for (CoreIndex i : session)
			remaining.erase(i);
		const double duration = result.simulated_duration;
		schedule.total_length += duration;
		schedule.sessions.push_back({std::move(session), duration, std::move(result)});
	}
	schedule.final_weights.assign(weights.values().begin(), weights.values().end());
	return schedule;
}

} // namespace thermsched
