#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hbill/billiard.hpp"

namespace hbill {

/// Trajectory as JSON. Non-finite numbers are written as the strings
/// "inf", "-inf" and "nan"; bounce points at infinity in the Klein chart
/// get a null Klein entry.
nlohmann::json trajectory_to_json(const Trajectory& traj);

/// Rebuilds table, side, status and states; the per-segment columns and the
/// closure report are recomputed rather than trusted.
Trajectory trajectory_from_json(const nlohmann::json& j);

std::string write_trajectory_json(const Trajectory& traj);
Trajectory read_trajectory_json(std::string_view text);

/// One row per bounce point: k,x0,x1,x2,xi1,xi2 (xi empty at infinity).
std::string klein_csv(const Trajectory& traj);

/// Klein-plane picture: boundary, projected caustic and the chords.
std::string trajectory_svg(const Trajectory& traj);

/// Shortest decimal that reads back to the same double; inf/nan spelled out.
std::string format_double(double v);
double parse_double(std::string_view s);

/// Options from a key=value text file. `table` is "a0,a1,a2"; everything
/// command specific stays in `options` verbatim.
struct RunConfig {
    std::optional<std::array<double, 3>> table;
    std::string format; // empty: the command picks
    std::string out;
    double tol = kClosureTol;
    std::map<std::string, std::string> options;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
std::string serialize_config(const RunConfig& cfg);

} // namespace hbill
