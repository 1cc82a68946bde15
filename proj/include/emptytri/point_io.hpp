#pragma once

// Shared point-set text format: one "x y" integer pair per line, '#' lines are
// comments, and an optional "# scale <rational>" header sets the grid scale.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "emptytri/geometry.hpp"

namespace emptytri {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

PointSet read_point_set(std::istream& in);
PointSet read_point_set_file(const std::string& path);

/// Writes each header line prefixed by "# ", then "# scale ...", then points.
void write_point_set(std::ostream& out, const PointSet& pts, const std::vector<std::string>& header = {});

}  // namespace emptytri
