#pragma once

#include <optional>
#include <string>

#include "bodies.hpp"
#include "funcgrid.hpp"

namespace borell {

// Grid file: {"dim":n,"box_min":[...],"box_max":[...],"shape":[...],"values":[...]}.
GridFunction load_grid_json(const std::string& path);
void save_grid_json(const GridFunction& f, const std::string& path);

// Body file: {"type":"polygon","vertices":[[x,y],...]} or
// {"type":"support","dim":n,"m":int,"seed":int,"values":[...]}.  Polygon files
// keep their exact vertex list alongside the support values so planar checks
// can use shoelace areas.
struct LoadedBody {
    SupportBody body;
    std::optional<Polygon2D> polygon;
};

LoadedBody load_body_json(const std::string& path, std::int64_t planar_m = 720);
void save_body_json(const SupportBody& body, const std::string& path);

}  // namespace borell
