#ifndef ACX_TABLE_IO_HPP
#define ACX_TABLE_IO_HPP

#include "acx/bench.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace acx {

enum class TableFormat { Csv, Json };

TableFormat parse_format(const std::string& text);

/// Header of the results CSV.
inline constexpr const char* kResultsHeader =
    "problem,draw,algorithm,time_ms,maps,grad_evals,obj_evals,converged,final_objective";
inline constexpr const char* kProfileHeader = "algorithm,tau,fraction";

/// Doubles are written with 17 significant digits; non-converged times are
/// an empty field. Rows are written in (problem, draw, algorithm) order.
void write_table(const ProfileTable& table, std::ostream& out, TableFormat format);
void write_table(const ProfileTable& table, const std::filesystem::path& path, TableFormat format);

ProfileTable read_table(std::istream& in, TableFormat format);
ProfileTable read_table(const std::filesystem::path& path);  ///< format from extension

void write_profile(const std::vector<ProfileCurve>& curves, std::ostream& out);
void write_profile(const std::vector<ProfileCurve>& curves, const std::filesystem::path& path);

void write_trajectory(const std::vector<TrajectoryPoint>& points, const std::filesystem::path& path);

}  // namespace acx

#endif  // ACX_TABLE_IO_HPP
