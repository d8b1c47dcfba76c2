#include "sandnet/render.hpp"

#include "sandnet/error.hpp"

#include <limits>

namespace sandnet {

ColorMap ColorMap::standard() {
    ColorMap map;
    map.bands = {
        {0, Rgb{0, 170, 0}},                                    // green
        {2, Rgb{235, 210, 40}},                                 // yellow
        {3, Rgb{200, 60, 190}},                                 // magenta
        {5, Rgb{220, 40, 40}},                                  // red
        {std::numeric_limits<Height>::max(), Rgb{0, 0, 0}},     // black
    };
    return map;
}

Rgb ColorMap::color_for(Height h) const {
    for (const Band& band : bands)
        if (h <= band.upper) return band.color;
    return bands.empty() ? overflow : bands.back().color;
}

std::string render_grid_ppm(const Network& net, const Configuration& heights, const ColorMap& map,
                            int cell_px) {
    if (!net.is_grid()) fail(ErrorCode::NotAGrid, "rendering needs a grid network");
    if (static_cast<int>(heights.size()) != net.size())
        fail(ErrorCode::LengthMismatch, "configuration vs network");
    if (cell_px < 1) fail(ErrorCode::ValidationError, "cell size must be >= 1");
    if (map.bands.empty() || map.bands.back().upper != std::numeric_limits<Height>::max())
        fail(ErrorCode::ValidationError, "color bands must cover every height");

    const int n = net.grid_spec()->side;
    const int px = n * cell_px;
    std::string out = "P6\n" + std::to_string(px) + " " + std::to_string(px) + "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(px) * px * 3);

    for (int y = 0; y < px; ++y) {
        const int row = y / cell_px + 1;
        const int dy = y % cell_px;
        for (int x = 0; x < px; ++x) {
            const int col = x / cell_px + 1;
            const int dx = x % cell_px;
            const NodeId id = static_cast<NodeId>((row - 1) * n + col);
            const Height h = heights[id - 1];
            Rgb c;
            if (h >= net.threshold(id)) {
                // Overflow cell: white with a diagonal cross marker.
                const bool on_cross = dx == dy || dx + dy == cell_px - 1;
                c = on_cross ? map.marker : map.overflow;
            } else {
                c = map.color_for(h);
            }
            out.push_back(static_cast<char>(c.r));
            out.push_back(static_cast<char>(c.g));
            out.push_back(static_cast<char>(c.b));
        }
    }
    return out;
}

} // namespace sandnet
