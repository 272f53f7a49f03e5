#pragma once

#include <string>
#include <vector>

namespace isoglot {

struct ScatterOptions {
    std::string x_label = "x";
    std::string y_label = "y";
    std::string title;
    std::string annotation; // drawn top-right, e.g. "r = -0.93"
    int width = 640;
    int height = 480;
};

// A static scatter plot with a least-squares line. The markup is fully
// deterministic: the axes are a single path, every point is a circle, and the
// fitted line is the only line element. The first child of the svg element is
// a version comment.
std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                        const ScatterOptions& opts);

} // namespace isoglot
