#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "sgn/scenario.hpp"

namespace sgn
{

/// %.17g; non-finite values print as nan, inf or -inf.
std::string format_number(double v);

/// JSON text with every floating-point number at 17 significant digits
/// (non-finite numbers become null).
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Columns x, h, u, P, Q.
void write_snapshot_csv(const std::filesystem::path& path, const FlowState& s, const Params& p,
                        const Grid& g);

/// Columns t, mass, energy, min_h, min_ux, max_abs_hx, sup_P, sup_Q, then
/// max_h, max_abs_u, max_abs_ux, inf_P, inf_Q, dissipation,
/// dissipation_rate, max_abs_script_r, max_abs_B.
void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesRow>& series);

nlohmann::json artifact_json(const RunArtifact& art);
nlohmann::json sweep_json(const SweepResult& res);

/// dir/config.ini, dir/series.csv, dir/summary.json and
/// dir/snapshots/snap_NNNNN.csv (one per stored time).
void write_run(const std::filesystem::path& dir, const RunArtifact& art);

/// One write_run directory per epsilon plus dir/sweep.json and
/// dir/convergence.csv.
void write_sweep(const std::filesystem::path& dir, const SweepResult& res);

} // namespace sgn
