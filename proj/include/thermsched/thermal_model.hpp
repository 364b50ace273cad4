#pragma once

#include "thermsched/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace thermsched {

/// Set of cores tested concurrently. Ordered so iteration is deterministic.
using CoreSet = std::set<CoreIndex>;

/// Physical constants of the die and its package.
struct ThermalParams {
	double k_silicon = 100.0;           // W/(m K)
	double die_thickness = 0.5e-3;      // m
	double r_vertical_per_area = 5e-4;  // K m^2 / W, die to ambient through the spreader
	double t_ambient = 45.0;            // deg C

	void validate() const
	{
		auto check = [](double v, const char* name) {
			if (!(v > 0.0) || !std::isfinite(v))
				throw InputError(std::string("thermal parameter ") + name + " must be finite and > 0");
		};
		check(k_silicon, "k_silicon");
		check(die_thickness, "die_thickness");
		check(r_vertical_per_area, "r_vertical_per_area");
		check(t_ambient, "t_ambient");
	}
};

/// Flat `key = value` file, `#` starts a comment. Unknown keys are
/// rejected; missing keys keep their value from `base`.
inline ThermalParams parse_thermal_params(std::istream& in, ThermalParams base = {})
{
	const std::map<std::string, double ThermalParams::*, std::less<>> keys = {
		{"k_silicon", &ThermalParams::k_silicon},
		{"die_thickness", &ThermalParams::die_thickness},
		{"r_vertical_per_area", &ThermalParams::r_vertical_per_area},
		{"t_ambient", &ThermalParams::t_ambient},
	};
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		std::string_view body = line;
		body = detail::trim(body.substr(0, body.find('#')));
		if (body.empty())
			continue;
		const auto eq = body.find('=');
		if (eq == std::string_view::npos)
			throw InputError("expected 'key = value'", lineno);
		const auto key = detail::trim(body.substr(0, eq));
		auto it = keys.find(key);
		if (it == keys.end())
			throw InputError("unknown parameter '" + std::string(key) + "'", lineno);
		base.*(it->second) = detail::parse_number(body.substr(eq + 1), lineno, key);
	}
	base.validate();
	return base;
}

inline ThermalParams parse_thermal_params(std::string_view text, ThermalParams base = {})
{
	std::istringstream in{std::string(text)};
	return parse_thermal_params(in, base);
}

/// Per-core multiplicative weights of the session thermal characteristic.
/// Start at 1 and only ever grow.
class Weights {
public:
	explicit Weights(std::size_t n)
		: w_(n, 1.0)
	{
	}

	double operator[](CoreIndex i) const { return w_.at(i); }
	void scale(CoreIndex i, double factor) { w_.at(i) *= factor; }
	std::span<const double> values() const noexcept { return w_; }
	std::size_t size() const noexcept { return w_.size(); }

private:
	std::vector<double> w_;
};

/// 1-D conduction through the silicon slab between two abutting cores:
/// center distance / (k * thickness * shared edge).
inline double lateral_resistance(CoreIndex i, CoreIndex j, const Floorplan& fp, const ThermalParams& params)
{
	const Neighbor* n = fp.adjacency().find(i, j);
	if (n == nullptr)
		throw std::invalid_argument("cores '" + fp.core(i).id + "' and '" + fp.core(j).id + "' are not adjacent");
	return n->center_distance / (params.k_silicon * params.die_thickness * n->shared_edge);
}

inline double vertical_resistance(CoreIndex i, const Floorplan& fp, const ThermalParams& params)
{
	return params.r_vertical_per_area / fp.core(i).area();
}

/// Equivalent resistance from active core i to ambient in the session model:
/// the vertical path in parallel with the lateral path to every neighbor that
/// is passive in `session`. Passive cores sit at ambient; lateral resistances
/// between two active cores are dropped.
inline double equivalent_resistance(CoreIndex i, const CoreSet& session, const Floorplan& fp,
				    const ThermalParams& params)
{
	if (!session.contains(i))
		throw std::invalid_argument("core '" + fp.core(i).id + "' is not in the session");
	double conductance = 1.0 / vertical_resistance(i, fp, params);
	for (const auto& n : fp.adjacency().neighbors(i))
		if (!session.contains(n.core))
			conductance += 1.0 / lateral_resistance(i, n.core, fp, params);
	return 1.0 / conductance;
}

/// Core thermal characteristic, kelvin.
inline double session_tc(CoreIndex i, const CoreSet& session, const PowerProfile& power, const Floorplan& fp,
			 const ThermalParams& params)
{
	return power.power(i) * equivalent_resistance(i, session, fp, params);
}

/// max over members of TC(i) * P(i) * W(i); zero for an empty session.
inline double session_stc(const CoreSet& session, const PowerProfile& power, const Weights& weights,
			  const Floorplan& fp, const ThermalParams& params)
{
	double stc = 0.0;
	for (CoreIndex i : session)
		stc = std::max(stc, session_tc(i, session, power, fp, params) * power.power(i) * weights[i]);
	return stc;
}

/// Full guiding model of one candidate session.
struct SessionThermalModel {
	CoreSet session;
	std::map<CoreIndex, double> r_eq; // K/W
	std::map<CoreIndex, double> tc;   // K
	double stc = 0.0;                 // K W
};

inline SessionThermalModel build_session_model(const CoreSet& session, const PowerProfile& power,
					       const Weights& weights, const Floorplan& fp,
					       const ThermalParams& params)
{
	SessionThermalModel m;
	m.session = session;
	for (CoreIndex i : session) {
		const double r = equivalent_resistance(i, session, fp, params);
		m.r_eq[i] = r;
		m.tc[i] = power.power(i) * r;
		m.stc = std::max(m.stc, m.tc[i] * power.power(i) * weights[i]);
	}
	return m;
}

} // namespace thermsched
