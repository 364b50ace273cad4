// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "thermsched/sweep.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace thermsched;
namespace tt = thermsched::testing;

namespace {

const std::string kData = THERMSCHED_DATA;

struct Outcome {
	bool ok;
	std::string detail;
};

Floorplan load_floorplan(const std::string& name)
{
	std::ifstream in(kData + "/" + name);
	if (!in)
		throw std::runtime_error("cannot open " + kData + "/" + name);
	return parse_floorplan(in);
}

PowerProfile load_power(const std::string& name, const Floorplan& fp)
{
	std::ifstream in(kData + "/" + name);
	if (!in)
		throw std::runtime_error("cannot open " + kData + "/" + name);
	return parse_power_profile(in, fp);
}

std::string fmt(const char* f, auto... args)
{
	char buf[256];
	std::snprintf(buf, sizeof buf, f, args...);
	return buf;
}

// 1. R_eq against the grounded-network nodal oracle, relative 1e-9.
Outcome equivalent_resistance_oracle()
{
	std::mt19937_64 rng(1);
	const ThermalParams p;
	double worst = 0.0;
	std::size_t checks = 0;
	for (int trial = 0; trial < 100; ++trial) {
		const auto fp = tt::random_floorplan(rng, 5 + trial % 11);
		for (int s = 0; s < 3; ++s) {
			const auto session = tt::random_session(rng, fp.size());
			for (CoreIndex i : session) {
				const double oracle = tt::grounded_network_rise(i, session, fp, p);
				worst = std::max(worst, std::abs(equivalent_resistance(i, session, fp, p) - oracle) / oracle);
				++checks;
			}
		}
	}
	return {worst <= 1e-9, fmt("%zu cores checked, max rel err %.3g", checks, worst)};
}

// 2. Residual bound, superposition and zero-power => ambient.
Outcome solver_soundness()
{
	std::mt19937_64 rng(2);
	const ThermalParams p;
	double worst_residual_ratio = 0.0, worst_superposition = 0.0, worst_ambient = 0.0;
	for (int trial = 0; trial < 100; ++trial) {
		const auto fp = tt::random_floorplan(rng, 5 + trial % 11);
		const auto p1 = tt::random_power(rng, fp, 0.0, 5.0);
		const auto p2 = tt::random_power(rng, fp, 0.0, 5.0);
		const auto session = tt::random_session(rng, fp.size());
		auto n1 = build_network(session, fp, p1, p);
		auto n2 = build_network(session, fp, p2, p);
		auto n12 = n1;
		n12.injection += n2.injection;
		auto n0 = n1;
		n0.injection.setZero();
		for (const auto* net : {&n1, &n2, &n12, &n0}) {
			const auto r = solve_steady_state(*net);
			const double bound = 1e-8 * std::max(1.0, net->injection.cwiseAbs().maxCoeff());
			worst_residual_ratio = std::max(worst_residual_ratio, r.residual / bound);
		}
		const auto r1 = solve_steady_state(n1), r2 = solve_steady_state(n2), r12 = solve_steady_state(n12),
			   r0 = solve_steady_state(n0);
		for (std::size_t i = 0; i < fp.size(); ++i) {
			const double sum = (r1.temps[i] - p.t_ambient) + (r2.temps[i] - p.t_ambient);
			worst_superposition = std::max(
				worst_superposition, std::abs((r12.temps[i] - p.t_ambient) - sum) / std::max(1.0, sum));
			worst_ambient = std::max(worst_ambient, std::abs(r0.temps[i] - p.t_ambient));
		}
	}
	const bool ok = worst_residual_ratio <= 1.0 && worst_superposition <= 1e-9 && worst_ambient == 0.0;
	return {ok, fmt("residual/bound %.3g, superposition rel err %.3g, zero-power deviation %.3g",
			worst_residual_ratio, worst_superposition, worst_ambient)};
}

// 3. Figure-1 analog: 4x power density at equal per-core power.
Outcome power_density_hot_spot()
{
	const auto fp = load_floorplan("fig1.flp");
	const auto power = load_power("fig1_power.csv", fp);
	const ThermalParams p;
	const CoreSet a{fp.index_of("C2"), fp.index_of("C3"), fp.index_of("C4")};
	const CoreSet b{fp.index_of("C5"), fp.index_of("C6"), fp.index_of("C7")};
	for (CoreIndex i : a)
		for (CoreIndex j : b)
			if (power.power(i) != power.power(j) || fp.core(j).area() != 4.0 * fp.core(i).area())
				return {false, "fixture does not have equal power at 4x density"};
	const double peak_a = simulate_session(a, fp, power, p).peak.celsius;
	const double peak_b = simulate_session(b, fp, power, p).peak.celsius;
	const double margin = 0.10 * (peak_b - p.t_ambient);
	return {peak_a - peak_b >= margin,
		fmt("peak A %.2f C vs peak B %.2f C, difference %.2f K (need >= %.2f K)", peak_a, peak_b,
		    peak_a - peak_b, margin)};
}

// 4. Figure-5 trend on the bundled 15-core floorplan.
Outcome stcl_trend()
{
	const auto fp = load_floorplan("soc15.flp");
	const auto power = load_power("soc15_power.csv", fp);
	const auto rows = run_sweep(fp, power, ThermalParams{}, {{145.0, 165.0, 185.0}, {20.0, 100.0}});
	if (rows.size() != 6)
		return {false, "screening failed for some TL"};
	bool ok = true;
	std::string detail;
	for (std::size_t t = 0; t < 3; ++t) {
		const auto& tight = rows[2 * t];
		const auto& loose = rows[2 * t + 1];
		ok = ok && tight.schedule_length >= loose.schedule_length
		     && loose.simulation_effort >= tight.simulation_effort;
		detail += fmt("TL %g: len %g->%g effort %g->%g; ", tight.tl, tight.schedule_length, loose.schedule_length,
			      tight.simulation_effort, loose.simulation_effort);
	}
	return {ok, detail};
}

// 5. Effort identity: no discards => effort == length; one engineered
//    violation => effort > length.
Outcome effort_identity()
{
	const ThermalParams p;
	const auto fp = load_floorplan("soc15.flp");
	const auto power = load_power("soc15_power.csv", fp);
	const auto tight = generate_schedule(fp, power, p, SchedulerConfig{185.0, 20.0});

	// 3-core strip with a hot middle core. The limit admits the full strip
	// only while the middle core's weight is 1, and TL sits between the
	// two-core peaks and the full-strip peak: the first session is discarded,
	// the retry drops one end core and validates.
	const auto strip = tt::strip(3, 0.002);
	const PowerProfile strip_power(strip, {{0.5, 1.0}, {2.0, 1.0}, {0.5, 1.0}});
	const double pair = std::max(simulate_session({0, 1}, strip, strip_power, p).peak.celsius,
				     simulate_session({1, 2}, strip, strip_power, p).peak.celsius);
	const double full = simulate_session({0, 1, 2}, strip, strip_power, p).peak.celsius;
	const double stcl = 1.0001 * session_stc({0, 1, 2}, strip_power, Weights(3), strip, p);
	const auto violated = generate_schedule(strip, strip_power, p, SchedulerConfig{0.5 * (pair + full), stcl});

	const bool ok = tight.discarded_sessions == 0 && tight.simulation_effort == tight.total_length
			&& violated.discarded_sessions == 1 && violated.simulation_effort > violated.total_length;
	return {ok, fmt("tight: len %g effort %g; engineered: len %g effort %g (%zu discarded)", tight.total_length,
			tight.simulation_effort, violated.total_length, violated.simulation_effort,
			violated.discarded_sessions)};
}

// 6. 200 randomized schedules: partition, safety, termination.
Outcome schedule_validity()
{
	std::mt19937_64 rng(6);
	const ThermalParams p;
	std::uniform_real_distribution<double> margin(1.0, 80.0), limit(2.0, 200.0);
	std::size_t discarded = 0;
	for (int trial = 0; trial < 200; ++trial) {
		const auto fp = tt::random_floorplan(rng, 5 + trial % 11, trial % 3 == 0 ? 0.006 : 0.012);
		const auto power = tt::random_power(rng, fp, 0.1, 2.5, trial % 2 == 0);
		double bcmt = p.t_ambient;
		for (CoreIndex i = 0; i < fp.size(); ++i)
			bcmt = std::max(bcmt, simulate_session({i}, fp, power, p).peak.celsius);
		const SchedulerConfig cfg{bcmt + margin(rng), limit(rng)};
		const auto s = generate_schedule(fp, power, p, cfg);
		std::vector<CoreSet> sets;
		for (const auto& ts : s.sessions) {
			if (!(ts.result.peak.celsius < cfg.tl))
				return {false, fmt("trial %d: session peak %.3f >= TL %.3f", trial, ts.result.peak.celsius, cfg.tl)};
			sets.push_back(ts.cores);
		}
		if (!tt::is_partition(sets, fp.size()))
			return {false, fmt("trial %d: sessions do not partition the cores", trial)};
		discarded += s.discarded_sessions;
	}
	return {true, fmt("200 schedules valid, %zu discarded sessions along the way", discarded)};
}

// 7. Two full sweeps are byte-identical (serial vs. parallel too).
Outcome sweep_determinism()
{
	const auto fp = load_floorplan("soc15.flp");
	const auto power = load_power("soc15_power.csv", fp);
	const SweepSpec grid{parse_value_list("145:185:5"), parse_value_list("20:100:10")};
	std::ostringstream a, b;
	write_sweep_csv(a, run_sweep(fp, power, ThermalParams{}, grid, 1.1, 1));
	write_sweep_csv(b, run_sweep(fp, power, ThermalParams{}, grid, 1.1, 4));
	const bool ok = a.str() == b.str() && a.str().size() > 0;
	return {ok, fmt("81-point sweep, %zu bytes, %s", a.str().size(), ok ? "identical" : "DIFFER")};
}

// 8. STC algebra: P -> aP scales STC by a^2; growth is monotone.
Outcome stc_algebra()
{
	std::mt19937_64 rng(8);
	const ThermalParams p;
	std::uniform_real_distribution<double> scale(0.1, 10.0);
	double worst_scaling = 0.0;
	std::size_t monotone_violations = 0, monotone_checks = 0;
	while (monotone_checks < 1000) {
		const auto fp = tt::random_floorplan(rng, 5 + monotone_checks % 11);
		const auto power = tt::random_power(rng, fp, 0.0, 4.0);
		const auto session = tt::random_session(rng, fp.size());
		const Weights w(fp.size());
		const double stc = session_stc(session, power, w, fp, p);
		const double alpha = scale(rng);
		const double scaled = session_stc(session, power.scaled(fp, alpha), w, fp, p);
		if (stc > 0.0)
			worst_scaling = std::max(worst_scaling, std::abs(scaled - alpha * alpha * stc) / (alpha * alpha * stc));

		CoreIndex c = std::uniform_int_distribution<CoreIndex>(0, fp.size() - 1)(rng);
		if (session.contains(c))
			continue;
		CoreSet grown = session;
		grown.insert(c);
		++monotone_checks;
		if (session_stc(grown, power, w, fp, p) < stc)
			++monotone_violations;
	}
	return {worst_scaling <= 1e-12 && monotone_violations == 0,
		fmt("scaling rel err %.3g, %zu/%zu growth cases monotone", worst_scaling,
		    monotone_checks - monotone_violations, monotone_checks)};
}

struct Criterion {
	const char* name;
	double limit_s; // 0: no runtime limit
	std::function<Outcome()> run;
};

} // namespace

int main()
{
	const Criterion criteria[] = {
		{"AC1 equivalent resistance vs grounded nodal oracle", 5.0, equivalent_resistance_oracle},
		{"AC2 steady-state solver soundness", 5.0, solver_soundness},
		{"AC3 power-density hot spot (dense vs sparse session)", 1.0, power_density_hot_spot},
		{"AC4 STCL trend on bundled 15-core floorplan", 60.0, stcl_trend},
		{"AC5 simulation effort identity", 10.0, effort_identity},
		{"AC6 schedule validity on 200 random runs", 120.0, schedule_validity},
		{"AC7 sweep determinism", 0.0, sweep_determinism},
		{"AC8 STC algebra", 0.0, stc_algebra},
	};
	int failures = 0;
	for (const auto& c : criteria) {
		const auto start = std::chrono::steady_clock::now();
		Outcome out;
		try {
			out = c.run();
		} catch (const std::exception& e) {
			out = {false, std::string("exception: ") + e.what()};
		}
		const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		if (c.limit_s > 0.0 && secs >= c.limit_s) {
			out.ok = false;
			out.detail += fmt(" [runtime %.2f s exceeds %.0f s]", secs, c.limit_s);
		}
		failures += out.ok ? 0 : 1;
		std::cout << (out.ok ? "[PASS] " : "[FAIL] ") << c.name << " (" << fmt("%.2f s", secs) << "): " << out.detail
			  << std::endl;
	}
	std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
		  << std::endl;
	return failures == 0 ? 0 : 1;
}
