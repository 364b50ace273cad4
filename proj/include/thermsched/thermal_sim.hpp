#pragma once

#include "thermsched/floorplan.hpp"
#include "thermsched/thermal_model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermsched {

/// Steady-state resistive network of the whole die: every core is a node,
/// every adjacent pair is coupled laterally and every node has a vertical
/// path to ambient. Node k is floorplan core k.
struct ThermalNetwork {
	Eigen::MatrixXd conductance; // W/K
	Eigen::VectorXd injection;   // W
	double ambient = 0.0;        // deg C

	std::size_t size() const noexcept { return static_cast<std::size_t>(injection.size()); }
};

class SolverError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct CoreTemperature {
	CoreIndex core = 0;
	double celsius = 0.0;
};

struct SimulationResult {
	std::vector<double> temps; // deg C, indexed by core
	CoreTemperature peak;
	double simulated_duration = 0.0; // s
	double residual = 0.0;           // ||G dT - P||_inf
};

/// Injection is P(i) for cores in `active`, 0 elsewhere.
inline ThermalNetwork build_network(const CoreSet& active, const Floorplan& fp, const PowerProfile& power,
				    const ThermalParams& params)
{
	const auto n = static_cast<Eigen::Index>(fp.size());
	ThermalNetwork net;
	net.conductance = Eigen::MatrixXd::Zero(n, n);
	net.injection = Eigen::VectorXd::Zero(n);
	net.ambient = params.t_ambient;
	for (CoreIndex i = 0; i < fp.size(); ++i) {
		const auto ii = static_cast<Eigen::Index>(i);
		net.conductance(ii, ii) += 1.0 / vertical_resistance(i, fp, params);
		for (const auto& nb : fp.adjacency().neighbors(i)) {
			const double g = 1.0 / lateral_resistance(i, nb.core, fp, params);
			net.conductance(ii, ii) += g;
			net.conductance(ii, static_cast<Eigen::Index>(nb.core)) -= g;
		}
	}
	for (CoreIndex i : active) {
		if (i >= fp.size())
			throw std::out_of_range("active core index out of range");
		net.injection(static_cast<Eigen::Index>(i)) = power.power(i);
	}
	return net;
}

/// Solves G dT = P by Cholesky factorization; temps = ambient + dT.
inline SimulationResult solve_steady_state(const ThermalNetwork& net)
{
	if (net.size() == 0)
		throw SolverError("empty thermal network");
	Eigen::LLT<Eigen::MatrixXd> llt(net.conductance);
	if (llt.info() != Eigen::Success)
		throw SolverError("conductance matrix is not positive definite (zero vertical conductance?)");
	const Eigen::VectorXd rise = llt.solve(net.injection);

	SimulationResult r;
	r.residual = (net.conductance * rise - net.injection).cwiseAbs().maxCoeff();
	const double bound = 1e-8 * std::max(1.0, net.injection.cwiseAbs().maxCoeff());
	if (!(r.residual <= bound))
		throw SolverError("steady-state residual " + std::to_string(r.residual) + " exceeds tolerance");

	r.temps.resize(net.size());
	for (std::size_t i = 0; i < net.size(); ++i)
		r.temps[i] = net.ambient + rise(static_cast<Eigen::Index>(i));
	const auto hottest = std::max_element(r.temps.begin(), r.temps.end());
	r.peak = {static_cast<CoreIndex>(hottest - r.temps.begin()), *hottest};
	return r;
}

/// Session cores run concurrently, so the simulated time is the longest
/// member test.
inline SimulationResult simulate_session(const CoreSet& session, const Floorplan& fp, const PowerProfile& power,
					 const ThermalParams& params)
{
	if (session.empty())
		throw std::invalid_argument("cannot simulate an empty session");
	auto r = solve_steady_state(build_network(session, fp, power, params));
	for (CoreIndex i : session)
		r.simulated_duration = std::max(r.simulated_duration, power.duration(i));
	return r;
}

} // namespace thermsched
