#include "gffm/grids.hpp"

#include <stdexcept>

namespace gffm {

std::pair<Network, BoundarySpec> rectangle_grid(int rows, int cols, double boundary_value,
                                                bool periodic_rows) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("rectangle_grid: degenerate grid");
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(rows) * cols);
    auto id = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            names.push_back("g" + std::to_string(r) + "_" + std::to_string(c));

    std::vector<std::tuple<int, int, double>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c)
            edges.emplace_back(id(r, c), id(r, c + 1), 1.0);
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c < cols; ++c)
            edges.emplace_back(id(r, c), id(r + 1, c), 1.0);
    if (periodic_rows && rows > 2)
        for (int c = 0; c < cols; ++c)
            edges.emplace_back(id(rows - 1, c), id(0, c), 1.0);

    Network net(std::move(names), std::move(edges));
    BoundarySpec bc;
    std::vector<int> hat, check;
    for (int r = 0; r < rows; ++r) {
        hat.push_back(id(r, 0));
        check.push_back(id(r, cols - 1));
    }
    for (int v : hat) {
        bc.boundary.push_back(v);
        bc.values.push_back(boundary_value);
    }
    for (int v : check) {
        bc.boundary.push_back(v);
        bc.values.push_back(boundary_value);
    }
    bc.hat = std::move(hat);
    bc.check = std::move(check);
    bc.validate(net);
    return {std::move(net), std::move(bc)};
}

}  // namespace gffm
