#include "borell/io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace borell {

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace

GridFunction load_grid_json(const std::string& path) {
    const json j = load_json_file(path);
    try {
        const std::size_t dim = j.at("dim").get<std::size_t>();
        auto box_min = j.at("box_min").get<std::vector<double>>();
        auto box_max = j.at("box_max").get<std::vector<double>>();
        auto shape = j.at("shape").get<std::vector<std::int64_t>>();
        auto values = j.at("values").get<std::vector<double>>();
        if (box_min.size() != dim || box_max.size() != dim || shape.size() != dim)
            throw std::invalid_argument("grid file dimension fields disagree");
        return GridFunction(std::move(box_min), std::move(box_max), std::move(shape),
                            std::move(values));
    } catch (const json::exception& e) {
        throw std::invalid_argument("grid file '" + path + "': " + e.what());
    }
}

void save_grid_json(const GridFunction& f, const std::string& path) {
    json j;
    j["dim"] = f.dim();
    j["box_min"] = f.box_min();
    j["box_max"] = f.box_max();
    j["shape"] = f.shape();
    j["values"] = f.values();
    write_json_file(j, path);
}

LoadedBody load_body_json(const std::string& path, std::int64_t planar_m) {
    const json j = load_json_file(path);
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "polygon") {
            auto raw = j.at("vertices").get<std::vector<std::array<double, 2>>>();
            Polygon2D poly(std::move(raw));
            SupportBody body =
                support_of_polytope(polygon_vertex_list(poly), DirectionGrid::planar(planar_m));
            return LoadedBody{std::move(body), std::move(poly)};
        }
        if (type == "support") {
            const std::size_t dim = j.at("dim").get<std::size_t>();
            const std::int64_t m = j.at("m").get<std::int64_t>();
            auto values = j.at("values").get<std::vector<double>>();
            std::shared_ptr<const DirectionGrid> grid;
            if (dim == 2) {
                grid = DirectionGrid::planar(m);
            } else {
                const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
                grid = DirectionGrid::sampled(dim, m, seed);
            }
            return LoadedBody{SupportBody(std::move(grid), std::move(values)), std::nullopt};
        }
        throw std::invalid_argument("unknown body type '" + type + "'");
    } catch (const json::exception& e) {
        throw std::invalid_argument("body file '" + path + "': " + e.what());
    }
}

void save_body_json(const SupportBody& body, const std::string& path) {
    json j;
    j["type"] = "support";
    j["dim"] = body.grid().dim();
    j["m"] = static_cast<std::int64_t>(body.grid().size());
    j["seed"] = body.grid().seed();
    j["values"] = body.values();
    write_json_file(j, path);
}

}  // namespace borell
