#pragma once

#include <string>
#include <vector>

#include "invlab/geometry.hpp"
#include "invlab/reconstruct.hpp"
#include "invlab/stabilitylab.hpp"

#include <json.hpp>

namespace invlab::io {

// 17 significant digits: decimal round-trips reproduce the double exactly,
// so repeated emissions of the same run are byte-identical.
std::string fmt17(double v);

std::string csv_row(const std::vector<double>& values);

nlohmann::ordered_json stability_json(const stabilitylab::StabilityReport& rep);
std::string stability_csv(const stabilitylab::StabilityReport& rep);

nlohmann::ordered_json bound_report_json(const geometry::BoundReport& rep);
std::string bound_report_csv_header();
std::string bound_report_csv(const geometry::BoundReport& rep);

nlohmann::ordered_json deficit_scan_json(const stabilitylab::DeficitScan& scan);
std::string deficit_scan_csv(const stabilitylab::DeficitScan& scan);

nlohmann::ordered_json reconstruction_json(const reconstruct::ReconstructionReport& rep);
std::string trajectory_csv(const reconstruct::Trajectory& traj);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace invlab::io
