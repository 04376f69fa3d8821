#pragma once

// Dependency-free SVG 1.1 plots. Output is deterministic: fixed numeric
// precision, no timestamps, primitives emitted in insertion order.

#include <string>
#include <utility>
#include <vector>

namespace slideocam::io {

using XY = std::pair<double, double>;

struct Style {
    std::string stroke = "#000000";
    double width = 1.0;
    std::string dash;  // SVG stroke-dasharray, empty for solid
    std::string fill = "none";
};

class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label, double width = 640,
            double height = 480);

    void polyline(std::vector<XY> pts, Style style, std::string label = {});
    void segment(XY a, XY b, Style style);
    void markers(std::vector<XY> pts, double radius_px, Style style, std::string label = {});
    /// Circle with a radius in data units (requires equal aspect to look round).
    void circle(XY centre, double radius, Style style);
    void text(XY at, std::string content, double size_px = 11);

    void set_equal_aspect(bool on) { equal_aspect_ = on; }
    void set_axes(bool on) { axes_ = on; }
    void set_bounds(double x0, double x1, double y0, double y1);

    std::string render() const;

private:
    enum class Kind { Polyline, Markers, Circle, Text };
    struct Item {
        Kind kind;
        std::vector<XY> pts;
        Style style;
        double size = 0.0;
        std::string label;
    };

    std::string title_, x_label_, y_label_;
    double width_, height_;
    bool equal_aspect_ = false;
    bool axes_ = true;
    bool fixed_bounds_ = false;
    double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
    std::vector<Item> items_;
};

/// Distinct stroke colours for series index i.
std::string palette(std::size_t i);

}  // namespace slideocam::io
