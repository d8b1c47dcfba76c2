#pragma once

#include "sandnet/heights.hpp"

#include <array>
#include <string>
#include <vector>

namespace sandnet {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Height-to-color bands: the first band whose inclusive upper bound
/// reaches the height wins, the last band is open-ended, so every height
/// maps to exactly one color. Cells at or above their threshold render in
/// the overflow color with a cross marker instead.
struct ColorMap {
    struct Band {
        Height upper;
        Rgb color;
    };
    std::vector<Band> bands;
    Rgb overflow{255, 255, 255};
    Rgb marker{0, 0, 0};

    /// 0 green, 1-2 yellow, 3 magenta, 4-5 red, 6+ black.
    static ColorMap standard();

    Rgb color_for(Height h) const;
};

/// Binary portable pixmap (P6, maxval 255) of a grid configuration,
/// cell_px pixels per cell, cells in row-major grid order.
std::string render_grid_ppm(const Network& net, const Configuration& heights,
                            const ColorMap& map = ColorMap::standard(), int cell_px = 32);

} // namespace sandnet
