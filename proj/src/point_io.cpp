#include "emptytri/point_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace emptytri {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

PointSet read_point_set(std::istream& in) {
    std::vector<Point> points;
    Rational scale;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream header(line.substr(first + 1));
            std::string key, value;
            if (header >> key && key == "scale") {
                if (!(header >> value)) throw ParseError(lineno, "scale header without a value");
                try {
                    scale = Rational::parse(value);
                } catch (const GeometryError& e) {
                    throw ParseError(lineno, e.what());
                }
            }
            continue;
        }
        std::istringstream fields(line);
        long long x = 0, y = 0;
        std::string rest;
        if (!(fields >> x >> y)) throw ParseError(lineno, "expected two integers, got '" + line + "'");
        if (fields >> rest) throw ParseError(lineno, "trailing characters '" + rest + "'");
        if (!coordinate_in_range(x) || !coordinate_in_range(y))
            throw ParseError(lineno, "coordinate outside the 2^31 grid");
        points.push_back({x, y});
    }
    try {
        return PointSet(std::move(points), scale);
    } catch (const GeometryError& e) {
        throw ParseError(lineno, e.what());
    }
}

PointSet read_point_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_point_set(in);
}

void write_point_set(std::ostream& out, const PointSet& pts, const std::vector<std::string>& header) {
    for (const auto& h : header) out << "# " << h << '\n';
    out << "# scale " << pts.scale().str() << '\n';
    for (const auto& p : pts) out << p.x << ' ' << p.y << '\n';
}

}  // namespace emptytri
