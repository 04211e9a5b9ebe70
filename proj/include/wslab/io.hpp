#pragma once

#include <string>

#include "wslab/experiments.hpp"
#include "wslab/geometry.hpp"
#include "wslab/metrics.hpp"
#include "wslab/slices.hpp"

namespace wslab {

// shortest round-trippable decimal for a double
std::string g17(double v);

uint64_t fnv1a64(const std::string& s);
std::string hex8(uint64_t h); // low 32 bits as 8 hex chars

// "{scenario}_{hex8(fnv1a64(canonical echo))}"
std::string output_basename(const std::string& scenario, const std::string& echo);

std::string domain_to_json(const PlanarDomain& dom);
PlanarDomain domain_from_json(const std::string& text); // throws BadFile

std::string dataset_to_json(const WsliceDataset& ds);
WsliceDataset dataset_from_json(const std::string& text); // throws BadFile
std::string path_to_json(const PathEstimate& pe);
PathEstimate path_from_json(const std::string& text); // throws BadFile
std::string check_report_to_json(const CheckReport& rep);
std::string experiment_to_json(const ExperimentReport& rep);
std::string experiment_to_csv(const ExperimentReport& rep);

// write to <path>.tmp then rename
void write_text_atomic(const std::string& path, const std::string& text);
std::string read_text(const std::string& path); // throws BadFile

struct SvgOptions {
    double width_px = 900.0;
    bool draw_midlines = false;
    std::vector<Polygon> overlay_regions; // filled translucent
    std::vector<Polyline> overlay_paths;
    std::vector<Point2> overlay_points;
};

std::string domain_to_svg(const PlanarDomain& dom, const SvgOptions& opt = {});

} // namespace wslab
