#pragma once

/// @file export.hpp
/// @brief Comma-separated field, EOC and mass tables; legacy VTK snapshots.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cbcfd/diagnostics.hpp"
#include "cbcfd/timestepper.hpp"

namespace cbcfd {

/// "i,j,x,y,value", one row per stored node.
void write_field_csv(std::ostream& os, const Field& f);
/// ASCII STRUCTURED_POINTS with cell data (cell fields only).
void write_field_vtk(std::ostream& os, const Field& f, const std::string& name);
/// "N,e_c,order,e_p,order,e_u,order,|e_p|_1,order"
void write_eoc_csv(std::ostream& os, const std::vector<ErrorRecord>& records);
/// "n,t,E"
void write_mass_csv(std::ostream& os, const MassSeries& series);

/// Writes snapshots and the final field in each format plus mass.csv.
/// Returns the paths written.  Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> export_report(const RunReport& report, const std::filesystem::path& directory,
                                                 const std::vector<std::string>& formats);

/// Opens a file for writing, creating parent directories.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace cbcfd
