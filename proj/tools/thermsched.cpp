// thermsched: thermal-safe test schedule generation and TL x STCL sweeps.
//
//   thermsched --floorplan chip.flp --power chip.csv --tl 145 --stcl 40
//   thermsched --floorplan chip.flp --power chip.csv --sweep-tl 145:185:5 --sweep-stcl 20:100:10

#include "thermsched/schedule_io.hpp"
#include "thermsched/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum ExitCode : int { kOk = 0, kInputError = 1, kScreeningFailure = 2 };

std::ifstream open_input(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw thermsched::InputError("cannot open '" + path + "'");
	return in;
}

template <typename Parse>
auto parse_file(const std::string& path, Parse parse)
{
	auto in = open_input(path);
	try {
		return parse(in);
	} catch (const thermsched::InputError& e) {
		throw thermsched::InputError(path + ": " + e.what());
	}
}

/// Writes to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text)
{
	if (out_path.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream out(out_path);
	if (!out)
		throw thermsched::InputError("cannot write '" + out_path + "'");
	out << text;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Thermal-safe SoC test schedule generator"};

	std::string floorplan_path, power_path, params_path, out_path, format = "json", order = "power_weight_desc";
	std::optional<double> tl, stcl, ambient, k_silicon, die_thickness, r_vertical;
	std::string sweep_tl, sweep_stcl;
	double weight_factor = 1.1;
	unsigned jobs = 1;

	app.add_option("--floorplan", floorplan_path, "floorplan file (name width height left_x bottom_y, meters)")
		->required();
	app.add_option("--power", power_path, "power CSV (core_id,power_watts,duration_s)")->required();
	app.add_option("--params", params_path, "thermal parameter file (key = value)");
	app.add_option("--tl", tl, "maximum allowable temperature, C");
	app.add_option("--stcl", stcl, "session thermal characteristic limit, K*W");
	app.add_option("--sweep-tl", sweep_tl, "TL values: start:stop:step (inclusive) or comma list");
	app.add_option("--sweep-stcl", sweep_stcl, "STCL values: start:stop:step (inclusive) or comma list");
	app.add_option("--out", out_path, "output file (default stdout)");
	app.add_option("--format", format, "single-run output format")->check(CLI::IsMember({"json", "text"}));
	app.add_option("--ambient", ambient, "ambient temperature, C");
	app.add_option("--k-silicon", k_silicon, "silicon thermal conductivity, W/(m K)");
	app.add_option("--die-thickness", die_thickness, "die thickness, m");
	app.add_option("--r-vertical", r_vertical, "area-normalized vertical resistance, K m^2/W");
	app.add_option("--weight-factor", weight_factor, "weight multiplier applied to violating cores");
	app.add_option("--order", order, "core order for session packing")
		->check(CLI::IsMember({"power_weight_desc", "floorplan"}));
	app.add_option("--jobs", jobs, "parallel sweep workers")->check(CLI::PositiveNumber);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int rc = app.exit(e);
		return rc == 0 ? kOk : kInputError;
	}

	using namespace thermsched;
	try {
		ThermalParams params;
		if (!params_path.empty())
			params = parse_file(params_path, [](std::istream& in) { return parse_thermal_params(in); });
		if (ambient)
			params.t_ambient = *ambient;
		if (k_silicon)
			params.k_silicon = *k_silicon;
		if (die_thickness)
			params.die_thickness = *die_thickness;
		if (r_vertical)
			params.r_vertical_per_area = *r_vertical;
		params.validate();

		const Floorplan fp = parse_file(floorplan_path, [](std::istream& in) { return parse_floorplan(in); });
		const PowerProfile power =
			parse_file(power_path, [&](std::istream& in) { return parse_power_profile(in, fp); });

		const bool sweep = !sweep_tl.empty() || !sweep_stcl.empty();
		if (sweep) {
			if (sweep_tl.empty() || sweep_stcl.empty())
				throw InputError("--sweep-tl and --sweep-stcl must be given together");
			const SweepSpec spec{parse_value_list(sweep_tl), parse_value_list(sweep_stcl)};
			const auto rows = run_sweep(fp, power, params, spec, weight_factor, jobs,
						    [](double failed_tl, const ThermalViolationError& e) {
							    std::cerr << "skipping TL " << failed_tl << ": " << e.what() << '\n';
						    });
			std::ostringstream csv;
			write_sweep_csv(csv, rows);
			emit(out_path, csv.str());
			return kOk;
		}

		if (!tl || !stcl)
			throw InputError("--tl and --stcl are required (or use --sweep-tl/--sweep-stcl)");
		const SchedulerConfig cfg{*tl, *stcl, weight_factor, parse_core_order(order)};
		const Schedule schedule = generate_schedule(fp, power, params, cfg);

		std::ostringstream text;
		write_schedule_text(text, schedule, fp, cfg);
		if (format == "json") {
			emit(out_path, schedule_to_json(schedule, fp, params, cfg).dump(2) + "\n");
			if (!out_path.empty())
				std::cerr << text.str();
		} else {
			emit(out_path, text.str());
		}
		return kOk;
	} catch (const ThermalViolationError& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kScreeningFailure;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return kInputError;
	}
}
