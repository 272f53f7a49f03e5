#include "isoglot/scatter.hpp"
#include "isoglot/common.hpp"
#include "isoglot/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace isoglot {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

// Round tick positions: about `want` evenly spaced steps of size 1/2/5*10^k.
std::vector<double> ticks(double lo, double hi, int want) {
    std::vector<double> out;
    double span = hi - lo;
    if (span <= 0.0) {
        out.push_back(lo);
        return out;
    }
    double raw = span / want;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) out.push_back(t);
    return out;
}

} // namespace

std::string scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                        const ScatterOptions& opts) {
    if (x.size() != y.size()) throw std::invalid_argument("scatter_svg: x and y sizes differ");
    if (x.size() < 2) throw std::invalid_argument("scatter_svg: need at least 2 points");

    const double w = opts.width, h = opts.height;
    const double ml = 70, mr = 20, mt = opts.title.empty() ? 20 : 40, mb = 50;
    const double pw = w - ml - mr, ph = h - mt - mb;

    double xmin = *std::min_element(x.begin(), x.end());
    double xmax = *std::max_element(x.begin(), x.end());
    double ymin = *std::min_element(y.begin(), y.end());
    double ymax = *std::max_element(y.begin(), y.end());
    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (span <= 0.0) span = std::max(1.0, std::abs(lo));
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(xmin, xmax);
    pad(ymin, ymax);

    auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double v) { return mt + ph - (v - ymin) / (ymax - ymin) * ph; };

    // Least-squares line.
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    const double intercept = my - slope * mx;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
        << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n";
    out << "<!-- " << kToolName << " " << kVersion << " -->\n";
    out << "<rect width=\"" << opts.width << "\" height=\"" << opts.height << "\" fill=\"white\"/>\n";

    if (!opts.title.empty())
        out << "<text x=\"" << fmt2(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"15\">"
            << escape_xml(opts.title) << "</text>\n";

    // Axes as one path: left and bottom plot edges.
    out << "<path d=\"M " << fmt2(ml) << " " << fmt2(mt) << " L " << fmt2(ml) << " " << fmt2(mt + ph) << " L "
        << fmt2(ml + pw) << " " << fmt2(mt + ph) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (double t : ticks(xmin, xmax, 5)) {
        double px = sx(t);
        out << "<path d=\"M " << fmt2(px) << " " << fmt2(mt + ph) << " L " << fmt2(px) << " " << fmt2(mt + ph + 5)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt2(px) << "\" y=\"" << fmt2(mt + ph + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(t)
            << "</text>\n";
    }
    for (double t : ticks(ymin, ymax, 5)) {
        double py = sy(t);
        out << "<path d=\"M " << fmt2(ml - 5) << " " << fmt2(py) << " L " << fmt2(ml) << " " << fmt2(py)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt2(ml - 8) << "\" y=\"" << fmt2(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(t)
            << "</text>\n";
    }

    out << "<text x=\"" << fmt2(ml + pw / 2) << "\" y=\"" << fmt2(h - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(opts.x_label)
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt2(mt + ph / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
        << fmt2(mt + ph / 2) << ")\">" << escape_xml(opts.y_label) << "</text>\n";

    // The fitted line, clipped to the plot box.
    double lx1 = xmin, lx2 = xmax;
    if (slope != 0.0) {
        double xa = (ymin - intercept) / slope;
        double xb = (ymax - intercept) / slope;
        if (xa > xb) std::swap(xa, xb);
        lx1 = std::max(lx1, xa);
        lx2 = std::min(lx2, xb);
    }
    if (lx1 > lx2) lx1 = lx2 = (xmin + xmax) / 2.0; // degenerate, keep the element present
    out << "<line x1=\"" << fmt2(sx(lx1)) << "\" y1=\"" << fmt2(sy(slope * lx1 + intercept)) << "\" x2=\""
        << fmt2(sx(lx2)) << "\" y2=\"" << fmt2(sy(slope * lx2 + intercept))
        << "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";

    for (std::size_t i = 0; i < n; ++i)
        out << "<circle cx=\"" << fmt2(sx(x[i])) << "\" cy=\"" << fmt2(sy(y[i]))
            << "\" r=\"3\" fill=\"#2c5d8f\" fill-opacity=\"0.7\"/>\n";

    if (!opts.annotation.empty())
        out << "<text x=\"" << fmt2(w - mr - 6) << "\" y=\"" << fmt2(mt + 16)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(opts.annotation)
            << "</text>\n";

    out << "</svg>\n";
    return out.str();
}

} // namespace isoglot
