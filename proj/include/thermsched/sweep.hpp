#pragma once

#include "thermsched/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace thermsched {

struct SweepSpec {
	std::vector<double> tl_values;   // deg C
	std::vector<double> stcl_values; // K W
};

struct SweepRow {
	double tl = 0.0;
	double stcl = 0.0;
	double schedule_length = 0.0;
	double simulation_effort = 0.0;
	double max_temperature = 0.0;

	friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Parses either `start:stop:step` (inclusive) or a comma list.
inline std::vector<double> parse_value_list(std::string_view text)
{
	text = detail::trim(text);
	std::vector<double> values;
	if (text.find(':') != std::string_view::npos) {
		std::vector<std::string_view> parts;
		std::size_t start = 0;
		for (;;) {
			const auto colon = text.find(':', start);
			parts.push_back(text.substr(start, colon - start));
			if (colon == std::string_view::npos)
				break;
			start = colon + 1;
		}
		if (parts.size() != 3)
			throw InputError("range must be start:stop:step, got '" + std::string(text) + "'");
		const double lo = detail::parse_number(parts[0], 0, "range start");
		const double hi = detail::parse_number(parts[1], 0, "range stop");
		const double step = detail::parse_number(parts[2], 0, "range step");
		if (!(step > 0.0) || hi < lo)
			throw InputError("range '" + std::string(text) + "' needs step > 0 and stop >= start");
		// Index-based so that accumulated rounding never drops the endpoint.
		const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
		for (std::size_t k = 0; k < count; ++k)
			values.push_back(lo + static_cast<double>(k) * step);
	} else {
		std::size_t start = 0;
		for (;;) {
			const auto comma = text.find(',', start);
			values.push_back(detail::parse_number(text.substr(start, comma - start), 0, "value"));
			if (comma == std::string_view::npos)
				break;
			start = comma + 1;
		}
	}
	if (values.empty())
		throw InputError("empty value list");
	return values;
}

/// Called once for every TL whose stage-1 screening failed.
using ScreeningFailureHandler = std::function<void(double tl, const ThermalViolationError&)>;

/// Evaluates every (tl, stcl) grid point. Rows come back in row-major order
/// (tl outer) regardless of `jobs`; TLs that fail screening contribute no
/// rows.
inline std::vector<SweepRow> run_sweep(const Floorplan& fp, const PowerProfile& power, const ThermalParams& params,
				       const SweepSpec& spec, double weight_factor = 1.1, unsigned jobs = 1,
				       const ScreeningFailureHandler& on_failure = {})
{
	if (spec.tl_values.empty() || spec.stcl_values.empty())
		throw InputError("sweep needs at least one TL and one STCL value");
	for (double tl : spec.tl_values)
		for (double stcl : spec.stcl_values)
			SchedulerConfig{tl, stcl, weight_factor}.validate(params);

	// Screening depends on TL only.
	std::vector<bool> tl_ok(spec.tl_values.size(), true);
	for (std::size_t t = 0; t < spec.tl_values.size(); ++t) {
		try {
			screen_cores(fp, power, params, spec.tl_values[t]);
		} catch (const ThermalViolationError& e) {
			tl_ok[t] = false;
			if (on_failure)
				on_failure(spec.tl_values[t], e);
		}
	}

	const std::size_t n_stcl = spec.stcl_values.size();
	std::vector<std::size_t> points;
	for (std::size_t t = 0; t < spec.tl_values.size(); ++t)
		if (tl_ok[t])
			for (std::size_t s = 0; s < n_stcl; ++s)
				points.push_back(t * n_stcl + s);

	std::vector<SweepRow> rows(points.size());
	std::vector<std::exception_ptr> errors(points.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t k; (k = next.fetch_add(1)) < points.size();) {
			const double tl = spec.tl_values[points[k] / n_stcl];
			const double stcl = spec.stcl_values[points[k] % n_stcl];
			try {
				const auto s = generate_schedule(fp, power, params, SchedulerConfig{tl, stcl, weight_factor});
				rows[k] = {tl, stcl, s.total_length, s.simulation_effort, s.max_temperature()};
			} catch (...) {
				errors[k] = std::current_exception();
			}
		}
	};
	jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, points.size()))));
	if (jobs == 1) {
		worker();
	} else {
		std::vector<std::jthread> pool;
		for (unsigned j = 0; j < jobs; ++j)
			pool.emplace_back(worker);
	}
	for (const auto& e : errors)
		if (e)
			std::rethrow_exception(e);
	return rows;
}

inline constexpr const char* kSweepCsvHeader = "tl_C,stcl,schedule_length_s,simulation_effort_s,max_temperature_C";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
	using detail::format_number;
	out << kSweepCsvHeader << '\n';
	for (const auto& r : rows)
		out << format_number(r.tl) << ',' << format_number(r.stcl) << ',' << format_number(r.schedule_length) << ','
		    << format_number(r.simulation_effort) << ',' << format_number(r.max_temperature) << '\n';
}

} // namespace thermsched
