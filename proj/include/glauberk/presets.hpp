#pragma once

// Named graph presets for the CLI and tests. The example-m cell is embedded
// so the binary resolves it without a data directory; the same text ships in
// data/example_m.cell.

#include <string>

#include "glauberk/cellspec.hpp"
#include "glauberk/errors.hpp"
#include "glauberk/gamma.hpp"

namespace glauberk {

// One-dimensional five-site motif whose bridge vertex (local 0) joins
// consecutive cells through two parallel three-step paths, forming one
// six-cycle per cell. Written with labels s = local + 1 + 5*cell, the edges
// meeting cell 0 read {-1,1},{0,1},{1,2},{1,3},{2,4},{3,5},{4,6},{5,6}; the
// two pairs {-1,1}/{4,6} and {0,1}/{5,6} are translates of each other, which
// leaves the six canonical templates below. Bridge degree 4, path degree 2.
inline const char* example_m_cell_text() {
    return R"(# five-site chain-of-six-cycles motif (1-graph)
# locals 0..4 at positions 0.1,0.3,0.5,0.7,0.9; local 0 is the bridge vertex
# shared between consecutive cells: 0 - {1,2} - {3,4} - next cell's 0
dim 1
vertex 0 0.1
vertex 1 0.3
vertex 2 0.5
vertex 3 0.7
vertex 4 0.9
edge 0 1 0
edge 0 2 0
edge 1 3 0
edge 2 4 0
edge 3 0 1
edge 4 0 1
)";
}

inline PeriodicGraph resolve_preset(const std::string& name) {
    if (name == "cubic1") return build_cubic(1);
    if (name == "cubic2") return build_cubic(2);
    if (name == "cubic3") return build_cubic(3);
    if (name.rfind("cubic", 0) == 0 && name.size() > 5)
        return build_cubic(std::stoi(name.substr(5)));
    if (name == "hex") return build_hexagonal();
    if (name == "example-m") return parse_cell_spec(example_m_cell_text());
    if (name.rfind("gamma:", 0) == 0) {
        // gamma:<base>,<ell>,<m>
        std::string rest = name.substr(6);
        auto c1 = rest.find(',');
        auto c2 = rest.rfind(',');
        if (c1 == std::string::npos || c2 == c1)
            throw SpecError("gamma preset needs gamma:<base>,<ell>,<m>");
        PeriodicGraph base = resolve_preset(rest.substr(0, c1));
        int ell = std::stoi(rest.substr(c1 + 1, c2 - c1 - 1));
        int m = std::stoi(rest.substr(c2 + 1));
        return build_gamma(base, ell, m).graph;
    }
    throw SpecError("unknown graph preset '" + name + "'");
}

}  // namespace glauberk
