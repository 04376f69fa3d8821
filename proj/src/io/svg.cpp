#include "slideocam/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace slideocam::io {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string style_attrs(const Style& s) {
    std::string out = " stroke=\"" + s.stroke + "\" stroke-width=\"" + fmt(s.width) +
                      "\" fill=\"" + s.fill + "\"";
    if (!s.dash.empty()) out += " stroke-dasharray=\"" + s.dash + "\"";
    return out;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

std::string tick_label(double v) {
    char buf[32];
    if (std::abs(v) < 1e-12) v = 0.0;
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::string palette(std::size_t i) {
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
    return colours[i % (sizeof(colours) / sizeof(colours[0]))];
}

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label, double width,
                 double height)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)),
      width_(width),
      height_(height) {}

void SvgPlot::polyline(std::vector<XY> pts, Style style, std::string label) {
    items_.push_back({Kind::Polyline, std::move(pts), std::move(style), 0.0, std::move(label)});
}

void SvgPlot::segment(XY a, XY b, Style style) {
    items_.push_back({Kind::Polyline, {a, b}, std::move(style), 0.0, {}});
}

void SvgPlot::markers(std::vector<XY> pts, double radius_px, Style style, std::string label) {
    items_.push_back({Kind::Markers, std::move(pts), std::move(style), radius_px, std::move(label)});
}

void SvgPlot::circle(XY centre, double radius, Style style) {
    items_.push_back({Kind::Circle, {centre}, std::move(style), radius, {}});
}

void SvgPlot::text(XY at, std::string content, double size_px) {
    items_.push_back({Kind::Text, {at}, Style{}, size_px, std::move(content)});
}

void SvgPlot::set_bounds(double x0, double x1, double y0, double y1) {
    fixed_bounds_ = true;
    x0_ = x0;
    x1_ = x1;
    y0_ = y0;
    y1_ = y1;
}

std::string SvgPlot::render() const {
    double x0 = x0_, x1 = x1_, y0 = y0_, y1 = y1_;
    if (!fixed_bounds_) {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -std::numeric_limits<double>::infinity();
        for (const auto& it : items_) {
            const double pad = it.kind == Kind::Circle ? it.size : 0.0;
            for (const auto& [x, y] : it.pts) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                x0 = std::min(x0, x - pad);
                x1 = std::max(x1, x + pad);
                y0 = std::min(y0, y - pad);
                y1 = std::max(y1, y + pad);
            }
        }
        if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
        if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
        const double mx = 0.04 * (x1 - x0);
        const double my = 0.04 * (y1 - y0);
        x0 -= mx, x1 += mx, y0 -= my, y1 += my;
    }
    const double left = 70, right = 150, top = 40, bottom = 55;
    const double pw = width_ - left - right;
    const double ph = height_ - top - bottom;
    double sx = pw / (x1 - x0);
    double sy = ph / (y1 - y0);
    if (equal_aspect_) sx = sy = std::min(sx, sy);
    auto px = [&](double x) { return left + (x - x0) * sx; };
    auto py = [&](double y) { return top + ph - (y - y0) * sy; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width_) +
         "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) +
         "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
         "\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"" + fmt(width_ / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape_xml(title_) + "</text>\n";

    if (axes_) {
        s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) +
             "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#888888\"/>\n";
        const double xs = nice_step(x1 - x0, 6);
        for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
            s += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(top + ph) + "\" x2=\"" + fmt(px(t)) +
                 "\" y2=\"" + fmt(top + ph + 5) + "\" stroke=\"#888888\"/>\n";
            s += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(top + ph + 18) +
                 "\" text-anchor=\"middle\" font-size=\"10\">" + tick_label(t) + "</text>\n";
        }
        const double ys = nice_step(y1 - y0, 6);
        for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
            s += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(left) +
                 "\" y2=\"" + fmt(py(t)) + "\" stroke=\"#888888\"/>\n";
            s += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py(t) + 3) +
                 "\" text-anchor=\"end\" font-size=\"10\">" + tick_label(t) + "</text>\n";
        }
        s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height_ - 12) +
             "\" text-anchor=\"middle\" font-size=\"12\">" + escape_xml(x_label_) + "</text>\n";
        s += "<text x=\"16\" y=\"" + fmt(top + ph / 2) +
             "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
             fmt(top + ph / 2) + ")\">" + escape_xml(y_label_) + "</text>\n";
    }

    int legend_row = 0;
    for (const auto& it : items_) {
        switch (it.kind) {
            case Kind::Polyline: {
                std::string pts;
                for (const auto& [x, y] : it.pts) {
                    if (!std::isfinite(x) || !std::isfinite(y)) continue;
                    if (!pts.empty()) pts += ' ';
                    pts += fmt(px(x)) + "," + fmt(py(y));
                }
                s += "<polyline points=\"" + pts + "\"" + style_attrs(it.style) + "/>\n";
                break;
            }
            case Kind::Markers:
                for (const auto& [x, y] : it.pts) {
                    if (!std::isfinite(x) || !std::isfinite(y)) continue;
                    s += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"" +
                         fmt(it.size) + "\"" + style_attrs(it.style) + "/>\n";
                }
                break;
            case Kind::Circle:
                s += "<ellipse cx=\"" + fmt(px(it.pts[0].first)) + "\" cy=\"" +
                     fmt(py(it.pts[0].second)) + "\" rx=\"" + fmt(it.size * sx) + "\" ry=\"" +
                     fmt(it.size * sy) + "\"" + style_attrs(it.style) + "/>\n";
                break;
            case Kind::Text:
                s += "<text x=\"" + fmt(px(it.pts[0].first)) + "\" y=\"" +
                     fmt(py(it.pts[0].second)) + "\" font-size=\"" + fmt(it.size) + "\">" +
                     escape_xml(it.label) + "</text>\n";
                break;
        }
        if (it.kind != Kind::Text && !it.label.empty()) {
            const double ly = top + 10 + 18 * legend_row++;
            const double lx = width_ - right + 10;
            Style st = it.style;
            if (it.kind == Kind::Markers) {
                s += "<circle cx=\"" + fmt(lx + 10) + "\" cy=\"" + fmt(ly) + "\" r=\"" +
                     fmt(std::max(it.size, 2.0)) + "\"" + style_attrs(st) + "/>\n";
            } else {
                s += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 20) +
                     "\" y2=\"" + fmt(ly) + "\"" + style_attrs(st) + "/>\n";
            }
            s += "<text x=\"" + fmt(lx + 26) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"11\">" +
                 escape_xml(it.label) + "</text>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

}  // namespace slideocam::io
