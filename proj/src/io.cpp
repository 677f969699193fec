#include "firelik/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace firelik::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path + " for reading");
    return in;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, const std::string& path, long row) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw std::runtime_error(path + " row " + std::to_string(row) +
                                 ": not a number: '" + cell + "'");
    }
    return v;
}

long parse_int(const std::string& cell, const std::string& path, long row) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw std::runtime_error(path + " row " + std::to_string(row) +
                                 ": not an integer: '" + cell + "'");
    }
    return v;
}

void expect_header(std::ifstream& in, const std::string& want, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != want) {
        throw std::runtime_error(path + ": expected header '" + want + "'");
    }
}

}  // namespace

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_field_csv(const std::string& path, const ScalarFieldd& field) {
    auto out = open_out(path);
    out << "x_m,y_m,value\n";
    const GridSpecd& g = field.spec;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.origin.y() + iy * g.dy;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.origin.x() + ix * g.dx;
            out << format_number(x) << ',' << format_number(y) << ','
                << format_number(field.at(ix, iy)) << '\n';
        }
    }
}

ScalarFieldd read_field_csv(const std::string& path) {
    auto in = open_in(path);
    expect_header(in, "x_m,y_m,value", path);

    std::vector<double> xs, ys, vs;
    std::string line;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != 3) {
            throw std::runtime_error(path + " row " + std::to_string(row) +
                                     ": expected 3 columns, got " +
                                     std::to_string(cells.size()));
        }
        xs.push_back(parse_number(cells[0], path, row));
        ys.push_back(parse_number(cells[1], path, row));
        vs.push_back(parse_number(cells[2], path, row));
    }
    if (xs.size() < 4) {
        throw std::runtime_error(path + ": too few rows for a grid (" +
                                 std::to_string(xs.size()) + ")");
    }

    std::size_t nx = 1;
    while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
    if (nx < 2 || xs.size() % nx != 0) {
        throw std::runtime_error(path + ": rows do not form a row-major grid");
    }
    const std::size_t ny = xs.size() / nx;
    GridSpecd spec(int(nx), int(ny), xs[1] - xs[0], ys[nx] - ys[0], Vec2d(xs[0], ys[0]));

    const double tol_x = 1e-6 * std::max(1.0, std::abs(spec.dx));
    const double tol_y = 1e-6 * std::max(1.0, std::abs(spec.dy));
    ArrayX<double> values(Eigen::Index(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t ix = i % nx, iy = i / nx;
        const double ex = spec.origin.x() + double(ix) * spec.dx;
        const double ey = spec.origin.y() + double(iy) * spec.dy;
        if (std::abs(xs[i] - ex) > tol_x || std::abs(ys[i] - ey) > tol_y) {
            throw std::runtime_error(path + " row " + std::to_string(i + 2) +
                                     ": node off the inferred grid");
        }
        values[Eigen::Index(i)] = vs[i];
    }
    return ScalarFieldd(spec, std::move(values));
}

void write_scene_csv(const std::string& path, const DetectionScened& scene) {
    auto out = open_out(path);
    out << "t_scan_s,x_m,y_m,detect,confidence\n";
    for (const auto& px : scene.pixels) {
        out << format_number(px.t_scan) << ',' << format_number(px.center.x()) << ','
            << format_number(px.center.y()) << ',' << px.detect << ','
            << format_number(px.confidence) << '\n';
    }
}

DetectionScened read_scene_csv(const std::string& path) {
    auto in = open_in(path);
    expect_header(in, "t_scan_s,x_m,y_m,detect,confidence", path);

    DetectionScened scene;
    std::string line;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != 5) {
            throw std::runtime_error(path + " row " + std::to_string(row) +
                                     ": expected 5 columns, got " +
                                     std::to_string(cells.size()));
        }
        DetectionPixeld px;
        px.t_scan = parse_number(cells[0], path, row);
        px.center.x() = parse_number(cells[1], path, row);
        px.center.y() = parse_number(cells[2], path, row);
        const long d = parse_int(cells[3], path, row);
        if (d != 0 && d != 1) {
            throw std::runtime_error(path + " row " + std::to_string(row) +
                                     ": detect must be 0 or 1, got " + cells[3]);
        }
        px.detect = int(d);
        px.confidence = parse_number(cells[4], path, row);
        if (!(px.confidence >= 0.0) || !(px.confidence <= 1.0)) {
            throw std::runtime_error(path + " row " + std::to_string(row) +
                                     ": confidence must lie in [0, 1], got " + cells[4]);
        }
        scene.pixels.push_back(px);
    }
    return scene;
}

void write_profile_csv(const std::string& path, const LikelihoodProfiled& prof) {
    auto out = open_out(path);
    out << "delta_t_s,log_p\n";
    for (Eigen::Index i = 0; i < prof.delta_t.size(); ++i) {
        out << format_number(prof.delta_t[i]) << ',' << format_number(prof.log_p[i]) << '\n';
    }
}

void write_surface_csv(const std::string& path, const std::vector<SurfaceSampled>& surface) {
    auto out = open_out(path);
    out << "x_m,y_m,t0_s,loglik\n";
    for (const auto& s : surface) {
        out << format_number(s.point.x()) << ',' << format_number(s.point.y()) << ','
            << format_number(s.t0) << ',' << format_number(s.loglik) << '\n';
    }
}

void write_best_json(const std::string& path, const SearchResultd& result) {
    nlohmann::json j;
    j["x_m"] = result.best.point.x();
    j["y_m"] = result.best.point.y();
    j["t0_s"] = result.best.t0;
    j["loglik"] = result.best_loglik;
    j["n_evaluated"] = result.n_evaluated;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace firelik::io
