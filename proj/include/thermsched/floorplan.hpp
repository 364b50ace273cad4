#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

namespace thermsched {

using CoreIndex = std::size_t;

/// Raised for every malformed or inconsistent input file. Carries the
/// 1-based line number when the error is tied to a line (0 otherwise).
class InputError : public std::runtime_error {
public:
	explicit InputError(const std::string& what, std::size_t line = 0)
		: std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what)
		, line_(line)
	{
	}

	std::size_t line() const noexcept { return line_; }

private:
	std::size_t line_;
};

/// Axis-aligned core rectangle; all lengths in meters.
struct CoreGeometry {
	std::string id;
	double width = 0.0;
	double height = 0.0;
	double left_x = 0.0;
	double bottom_y = 0.0;

	double right_x() const noexcept { return left_x + width; }
	double top_y() const noexcept { return bottom_y + height; }
	double area() const noexcept { return width * height; }
	double center_x() const noexcept { return left_x + 0.5 * width; }
	double center_y() const noexcept { return bottom_y + 0.5 * height; }

	friend bool operator==(const CoreGeometry&, const CoreGeometry&) = default;
};

/// Pairs closer than this along a shared edge are not considered adjacent.
inline constexpr double kAdjacencyEpsilon = 1e-9;

/// Length of the boundary segment shared by two non-overlapping rectangles.
/// Zero when they do not abut or touch only at a corner.
inline double shared_edge_length(const CoreGeometry& a, const CoreGeometry& b) noexcept
{
	auto overlap = [](double lo1, double hi1, double lo2, double hi2) {
		return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
	};
	auto touching = [](double x, double y) { return std::abs(x - y) <= kAdjacencyEpsilon; };

	double len = 0.0;
	// vertical seam: a's right side against b's left side or vice versa
	if (touching(a.right_x(), b.left_x) || touching(b.right_x(), a.left_x))
		len = std::max(len, overlap(a.bottom_y, a.top_y(), b.bottom_y, b.top_y()));
	// horizontal seam
	if (touching(a.top_y(), b.bottom_y) || touching(b.top_y(), a.bottom_y))
		len = std::max(len, overlap(a.left_x, a.right_x(), b.left_x, b.right_x()));
	return len;
}

inline double center_distance(const CoreGeometry& a, const CoreGeometry& b) noexcept
{
	return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

struct Neighbor {
	CoreIndex core;
	double shared_edge;
	double center_distance;
};

/// Lateral adjacency between cores. Stored as per-core neighbor lists, each
/// sorted by core index; symmetric by construction.
class AdjacencyGraph {
public:
	AdjacencyGraph() = default;
	explicit AdjacencyGraph(std::vector<std::vector<Neighbor>> neighbors)
		: neighbors_(std::move(neighbors))
	{
	}

	std::size_t size() const noexcept { return neighbors_.size(); }
	std::span<const Neighbor> neighbors(CoreIndex i) const { return neighbors_.at(i); }

	/// Neighbor record for (i, j), or nullptr if not adjacent.
	const Neighbor* find(CoreIndex i, CoreIndex j) const
	{
		for (const auto& n : neighbors_.at(i))
			if (n.core == j)
				return &n;
		return nullptr;
	}

	bool adjacent(CoreIndex i, CoreIndex j) const { return find(i, j) != nullptr; }

	std::size_t edge_count() const noexcept
	{
		std::size_t twice = 0;
		for (const auto& list : neighbors_)
			twice += list.size();
		return twice / 2;
	}

private:
	std::vector<std::vector<Neighbor>> neighbors_;
};

inline AdjacencyGraph build_adjacency(std::span<const CoreGeometry> cores)
{
	std::vector<std::vector<Neighbor>> neighbors(cores.size());
	for (CoreIndex i = 0; i < cores.size(); ++i) {
		for (CoreIndex j = i + 1; j < cores.size(); ++j) {
			const double edge = shared_edge_length(cores[i], cores[j]);
			if (edge <= kAdjacencyEpsilon)
				continue;
			const double dist = center_distance(cores[i], cores[j]);
			neighbors[i].push_back({j, edge, dist});
			neighbors[j].push_back({i, edge, dist});
		}
	}
	for (auto& list : neighbors)
		std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) { return x.core < y.core; });
	return AdjacencyGraph(std::move(neighbors));
}

/// Validated, immutable set of core rectangles in file order. The adjacency
/// graph is derived once at construction.
class Floorplan {
public:
	explicit Floorplan(std::vector<CoreGeometry> cores)
		: cores_(std::move(cores))
	{
		if (cores_.empty())
			throw InputError("floorplan has no cores");
		for (CoreIndex i = 0; i < cores_.size(); ++i) {
			const auto& c = cores_[i];
			if (!(c.width > 0.0) || !(c.height > 0.0) || !std::isfinite(c.width) || !std::isfinite(c.height))
				throw InputError("core '" + c.id + "' has non-positive dimension");
			if (!std::isfinite(c.left_x) || !std::isfinite(c.bottom_y))
				throw InputError("core '" + c.id + "' has non-finite position");
			if (!index_.emplace(c.id, i).second)
				throw InputError("duplicate core id '" + c.id + "'");
		}
		for (CoreIndex i = 0; i < cores_.size(); ++i)
			for (CoreIndex j = i + 1; j < cores_.size(); ++j)
				if (overlap_area(cores_[i], cores_[j]) > 0.0)
					throw InputError("cores '" + cores_[i].id + "' and '" + cores_[j].id + "' overlap");
		adjacency_ = build_adjacency(cores_);
	}

	std::size_t size() const noexcept { return cores_.size(); }
	std::span<const CoreGeometry> cores() const noexcept { return cores_; }
	const CoreGeometry& core(CoreIndex i) const { return cores_.at(i); }
	const AdjacencyGraph& adjacency() const noexcept { return adjacency_; }

	std::optional<CoreIndex> find(std::string_view id) const
	{
		auto it = index_.find(std::string(id));
		if (it == index_.end())
			return std::nullopt;
		return it->second;
	}

	CoreIndex index_of(std::string_view id) const
	{
		if (auto i = find(id))
			return *i;
		throw InputError("unknown core id '" + std::string(id) + "'");
	}

	friend bool operator==(const Floorplan& a, const Floorplan& b) { return a.cores_ == b.cores_; }

private:
	// Strictly positive-area intersection only; abutment is legal. Overlaps
	// thinner than the adjacency epsilon are treated as floating-point seams.
	static double overlap_area(const CoreGeometry& a, const CoreGeometry& b)
	{
		const double dx = std::min(a.right_x(), b.right_x()) - std::max(a.left_x, b.left_x);
		const double dy = std::min(a.top_y(), b.top_y()) - std::max(a.bottom_y, b.bottom_y);
		if (dx <= kAdjacencyEpsilon || dy <= kAdjacencyEpsilon)
			return 0.0;
		return dx * dy;
	}

	std::vector<CoreGeometry> cores_;
	std::unordered_map<std::string, CoreIndex> index_;
	AdjacencyGraph adjacency_;
};

struct CoreTest {
	double power = 0.0;    // W
	double duration = 0.0; // s

	friend bool operator==(const CoreTest&, const CoreTest&) = default;
};

/// Test power and duration per core, indexed like the floorplan it was
/// validated against.
class PowerProfile {
public:
	PowerProfile() = default;

	/// `tests[i]` belongs to floorplan core i.
	PowerProfile(const Floorplan& fp, std::vector<CoreTest> tests)
		: tests_(std::move(tests))
	{
		if (tests_.size() != fp.size())
			throw InputError("power profile size does not match floorplan");
		for (CoreIndex i = 0; i < tests_.size(); ++i) {
			if (!(tests_[i].power >= 0.0) || !std::isfinite(tests_[i].power))
				throw InputError("core '" + fp.core(i).id + "' has negative test power");
			if (!(tests_[i].duration > 0.0) || !std::isfinite(tests_[i].duration))
				throw InputError("core '" + fp.core(i).id + "' has non-positive test duration");
		}
	}

	std::size_t size() const noexcept { return tests_.size(); }
	double power(CoreIndex i) const { return tests_.at(i).power; }
	double duration(CoreIndex i) const { return tests_.at(i).duration; }
	std::span<const CoreTest> tests() const noexcept { return tests_; }

	/// Copy with every power multiplied by `factor`.
	PowerProfile scaled(const Floorplan& fp, double factor) const
	{
		auto tests = tests_;
		for (auto& t : tests)
			t.power *= factor;
		return PowerProfile(fp, std::move(tests));
	}

private:
	std::vector<CoreTest> tests_;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
	constexpr std::string_view ws = " \t\r\n";
	const auto b = s.find_first_not_of(ws);
	if (b == std::string_view::npos)
		return {};
	const auto e = s.find_last_not_of(ws);
	return s.substr(b, e - b + 1);
}

inline bool skippable(std::string_view line)
{
	line = trim(line);
	return line.empty() || line.front() == '#';
}

inline double parse_number(std::string_view tok, std::size_t line, std::string_view what)
{
	tok = trim(tok);
	if (!tok.empty() && tok.front() == '+')
		tok.remove_prefix(1);
	double v = 0.0;
	auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
	if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
		throw InputError("malformed " + std::string(what) + " '" + std::string(tok) + "'", line);
	return v;
}

inline std::string format_number(double v)
{
	char buf[64];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, ptr);
}

} // namespace detail

/// Reads whitespace-separated `name width height left_x bottom_y` records
/// (meters). `#` lines and blank lines are ignored.
inline Floorplan parse_floorplan(std::istream& in)
{
	std::vector<CoreGeometry> cores;
	std::map<std::string, std::size_t> first_line;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		if (detail::skippable(line))
			continue;
		std::istringstream fields(line);
		std::vector<std::string> tok;
		for (std::string t; fields >> t;)
			tok.push_back(std::move(t));
		if (tok.size() != 5)
			throw InputError("expected 5 fields 'name width height left_x bottom_y', got "
						 + std::to_string(tok.size()),
					 lineno);
		CoreGeometry c;
		c.id = tok[0];
		c.width = detail::parse_number(tok[1], lineno, "width");
		c.height = detail::parse_number(tok[2], lineno, "height");
		c.left_x = detail::parse_number(tok[3], lineno, "left_x");
		c.bottom_y = detail::parse_number(tok[4], lineno, "bottom_y");
		if (!(c.width > 0.0) || !(c.height > 0.0))
			throw InputError("core '" + c.id + "' has non-positive dimension", lineno);
		if (auto [it, fresh] = first_line.emplace(c.id, lineno); !fresh)
			throw InputError("duplicate core id '" + c.id + "' (first defined on line "
						 + std::to_string(it->second) + ")",
					 lineno);
		cores.push_back(std::move(c));
	}
	return Floorplan(std::move(cores));
}

inline Floorplan parse_floorplan(std::string_view text)
{
	std::istringstream in{std::string(text)};
	return parse_floorplan(in);
}

/// Inverse of parse_floorplan; numbers use the shortest round-trip form.
inline void write_floorplan(std::ostream& out, const Floorplan& fp)
{
	for (const auto& c : fp.cores())
		out << c.id << ' ' << detail::format_number(c.width) << ' ' << detail::format_number(c.height)
		    << ' ' << detail::format_number(c.left_x) << ' ' << detail::format_number(c.bottom_y) << '\n';
}

/// Reads `core_id,power_watts,duration_s` CSV records and checks them
/// against the floorplan's core set.
inline PowerProfile parse_power_profile(std::istream& in, const Floorplan& fp)
{
	std::vector<std::optional<CoreTest>> seen(fp.size());
	std::string line;
	std::size_t lineno = 0;
	bool first_record = true;
	while (std::getline(in, line)) {
		++lineno;
		if (detail::skippable(line))
			continue;
		const auto body = detail::trim(line);
		if (first_record && body == "core_id,power_watts,duration_s") {
			first_record = false;
			continue;
		}
		first_record = false;

		std::vector<std::string_view> tok;
		std::size_t start = 0;
		for (;;) {
			const auto comma = body.find(',', start);
			tok.push_back(detail::trim(body.substr(start, comma - start)));
			if (comma == std::string_view::npos)
				break;
			start = comma + 1;
		}
		if (tok.size() != 3)
			throw InputError("expected 'core_id,power_watts,duration_s', got " + std::to_string(tok.size())
						 + " fields",
					 lineno);
		const auto idx = fp.find(tok[0]);
		if (!idx)
			throw InputError("unknown core id '" + std::string(tok[0]) + "'", lineno);
		if (seen[*idx])
			throw InputError("duplicate record for core '" + std::string(tok[0]) + "'", lineno);
		CoreTest t;
		t.power = detail::parse_number(tok[1], lineno, "power");
		t.duration = detail::parse_number(tok[2], lineno, "duration");
		if (t.power < 0.0)
			throw InputError("negative power for core '" + std::string(tok[0]) + "'", lineno);
		if (!(t.duration > 0.0))
			throw InputError("non-positive duration for core '" + std::string(tok[0]) + "'", lineno);
		seen[*idx] = t;
	}
	std::vector<CoreTest> tests;
	tests.reserve(fp.size());
	for (CoreIndex i = 0; i < fp.size(); ++i) {
		if (!seen[i])
			throw InputError("missing power record for core '" + fp.core(i).id + "'");
		tests.push_back(*seen[i]);
	}
	return PowerProfile(fp, std::move(tests));
}

inline PowerProfile parse_power_profile(std::string_view text, const Floorplan& fp)
{
	std::istringstream in{std::string(text)};
	return parse_power_profile(in, fp);
}

} // namespace thermsched
