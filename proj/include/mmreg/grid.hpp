#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace mmreg {

/// Row-major single-channel raster. Pixel (x, y) lives at data[y * width + x].
template <typename T>
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    T& operator()(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    const T& operator()(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    template <typename U>
    bool same_shape(const Grid<U>& other) const {
        return width == other.width && height == other.height;
    }
};

/// Single-precision image container used at pipeline entry.
using ImageGrid = Grid<float>;

/// Double-precision working grid for the feature pipeline.
using Field = Grid<double>;

template <typename T>
std::pair<T, T> min_max(const Grid<T>& g) {
    T lo = std::numeric_limits<T>::max();
    T hi = std::numeric_limits<T>::lowest();
    for (T v : g.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

template <typename U, typename T>
Grid<U> grid_cast(const Grid<T>& g) {
    Grid<U> out(g.width, g.height);
    for (std::size_t i = 0; i < g.data.size(); ++i) out.data[i] = static_cast<U>(g.data[i]);
    return out;
}

inline Field to_field(const ImageGrid& img) { return grid_cast<double>(img); }

}  // namespace mmreg
