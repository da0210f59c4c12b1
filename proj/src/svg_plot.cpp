#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace arps::svg {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

// 1, 2, 5 x 10^k step giving roughly `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double f = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return f * mag;
}

}  // namespace

const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return colors;
}

Plot::Plot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void Plot::set_x_range(double lo, double hi, bool log_scale) { x_ = Axis{lo, hi, log_scale, true}; }
void Plot::set_y_range(double lo, double hi, bool log_scale) { y_ = Axis{lo, hi, log_scale, true}; }

void Plot::add_line(std::span<const double> xs, std::span<const double> ys, std::string color,
                    bool dashed, std::string css_class, std::string legend) {
    lines_.push_back(Line{{xs.begin(), xs.end()},
                          {ys.begin(), ys.end()},
                          std::move(color),
                          std::move(css_class),
                          std::move(legend),
                          dashed});
}

void Plot::add_mark(double x, double y, std::string color, std::string css_class) {
    marks_.push_back(Mark{x, y, std::move(color), std::move(css_class)});
}

void Plot::add_hline(double y, std::string label, std::string css_class) {
    refs_.push_back(RefLine{y, std::move(label), std::move(css_class), true});
}

void Plot::add_vline(double x, std::string label, std::string css_class) {
    refs_.push_back(RefLine{x, std::move(label), std::move(css_class), false});
}

void Plot::autorange() {
    auto fit = [](Axis& a, auto values) {
        if (a.set) return;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double v : values) {
            if (!std::isfinite(v) || (a.log && v <= 0.0)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!std::isfinite(lo)) {
            lo = a.log ? 1.0 : 0.0;
            hi = a.log ? 10.0 : 1.0;
        }
        if (hi <= lo) hi = a.log ? lo * 10.0 : lo + 1.0;
        a.lo = lo;
        a.hi = hi;
        a.set = true;
    };
    std::vector<double> xs, ys;
    for (const auto& l : lines_) {
        xs.insert(xs.end(), l.xs.begin(), l.xs.end());
        ys.insert(ys.end(), l.ys.begin(), l.ys.end());
    }
    for (const auto& m : marks_) {
        xs.push_back(m.x);
        ys.push_back(m.y);
    }
    for (const auto& r : refs_) (r.horizontal ? ys : xs).push_back(r.value);
    fit(x_, xs);
    fit(y_, ys);
}

double Plot::to_unit(const Axis& a, double v) {
    if (a.log) {
        const double lv = std::log10(std::max(v, a.lo * 1e-3));
        return (lv - std::log10(a.lo)) / (std::log10(a.hi) - std::log10(a.lo));
    }
    return (v - a.lo) / (a.hi - a.lo);
}

double Plot::px(double x) const {
    return kLeft + to_unit(x_, x) * (kWidth - kLeft - kRight);
}

double Plot::py(double y) const {
    return kHeight - kBottom - to_unit(y_, y) * (kHeight - kTop - kBottom);
}

std::string Plot::render() const {
    Plot p = *this;
    p.autorange();
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kTop, y1 = kHeight - kBottom;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(kWidth) + "\" height=\"" +
         fmt2(kHeight) + "\" viewBox=\"0 0 " + fmt2(kWidth) + " " + fmt2(kHeight) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + fmt2(kWidth) + "\" height=\"" + fmt2(kHeight) +
         "\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt2(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         escape(title_) + "</text>\n";
    s += "<clipPath id=\"plot-area\"><rect x=\"" + fmt2(x0) + "\" y=\"" + fmt2(y0) +
         "\" width=\"" + fmt2(x1 - x0) + "\" height=\"" + fmt2(y1 - y0) + "\"/></clipPath>\n";
    s += "<rect class=\"frame\" x=\"" + fmt2(x0) + "\" y=\"" + fmt2(y0) + "\" width=\"" +
         fmt2(x1 - x0) + "\" height=\"" + fmt2(y1 - y0) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    auto ticks = [](const Axis& a) {
        std::vector<double> out;
        if (a.log) {
            for (double e = std::ceil(std::log10(a.lo) - 1e-9); e <= std::log10(a.hi) + 1e-9; e += 1)
                out.push_back(std::pow(10.0, e));
        } else {
            const double st = nice_step(a.hi - a.lo, 5);
            for (double v = std::ceil(a.lo / st) * st; v <= a.hi + st * 1e-9; v += st)
                out.push_back(std::abs(v) < st * 1e-9 ? 0.0 : v);
        }
        return out;
    };
    s += "<g class=\"axis-x\" font-size=\"11\">\n";
    for (double v : ticks(p.x_)) {
        const double x = p.px(v);
        s += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(y1) + "\" x2=\"" + fmt2(x) + "\" y2=\"" +
             fmt2(y1 + 5) + "\" stroke=\"black\"/>";
        s += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(y1 + 18) + "\" text-anchor=\"middle\">" +
             tick_label(v) + "</text>\n";
    }
    s += "<text x=\"" + fmt2((x0 + x1) / 2) + "\" y=\"" + fmt2(kHeight - 15) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(x_label_) + "</text>\n</g>\n";
    s += "<g class=\"axis-y\" font-size=\"11\">\n";
    for (double v : ticks(p.y_)) {
        const double y = p.py(v);
        s += "<line x1=\"" + fmt2(x0 - 5) + "\" y1=\"" + fmt2(y) + "\" x2=\"" + fmt2(x0) +
             "\" y2=\"" + fmt2(y) + "\" stroke=\"black\"/>";
        s += "<text x=\"" + fmt2(x0 - 8) + "\" y=\"" + fmt2(y + 4) + "\" text-anchor=\"end\">" +
             tick_label(v) + "</text>\n";
    }
    s += "<text x=\"18\" y=\"" + fmt2((y0 + y1) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         fmt2((y0 + y1) / 2) + ")\">" + escape(y_label_) + "</text>\n</g>\n";

    s += "<g clip-path=\"url(#plot-area)\">\n";
    for (const auto& l : p.lines_) {
        s += "<polyline class=\"" + l.css_class + "\" fill=\"none\" stroke=\"" + l.color +
             "\" stroke-width=\"1.2\"";
        if (l.dashed) s += " stroke-dasharray=\"5,3\"";
        s += " points=\"";
        for (std::size_t i = 0; i < l.xs.size(); ++i) {
            if (!std::isfinite(l.ys[i])) continue;
            s += fmt2(p.px(l.xs[i])) + "," + fmt2(p.py(l.ys[i])) + " ";
        }
        s += "\"/>\n";
    }
    for (const auto& m : p.marks_) {
        s += "<circle class=\"" + m.css_class + "\" cx=\"" + fmt2(p.px(m.x)) + "\" cy=\"" +
             fmt2(p.py(m.y)) + "\" r=\"4\" fill=\"" + m.color + "\"/>\n";
    }
    for (const auto& r : p.refs_) {
        if (r.horizontal) {
            const double y = p.py(r.value);
            s += "<line class=\"" + r.css_class + "\" x1=\"" + fmt2(x0) + "\" y1=\"" + fmt2(y) +
                 "\" x2=\"" + fmt2(x1) + "\" y2=\"" + fmt2(y) +
                 "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
            s += "<text x=\"" + fmt2(x1 - 4) + "\" y=\"" + fmt2(y - 4) +
                 "\" text-anchor=\"end\" font-size=\"11\" fill=\"gray\">" + escape(r.label) +
                 "</text>\n";
        } else {
            const double x = p.px(r.value);
            s += "<line class=\"" + r.css_class + "\" x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(y0) +
                 "\" x2=\"" + fmt2(x) + "\" y2=\"" + fmt2(y1) +
                 "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
            s += "<text x=\"" + fmt2(x + 4) + "\" y=\"" + fmt2(y0 + 14) +
                 "\" font-size=\"11\" fill=\"gray\">" + escape(r.label) + "</text>\n";
        }
    }
    s += "</g>\n";

    double ly = y0 + 14;
    for (const auto& l : p.lines_) {
        if (l.legend.empty()) continue;
        s += "<text class=\"legend\" x=\"" + fmt2(x0 + 10) + "\" y=\"" + fmt2(ly) +
             "\" font-size=\"11\" fill=\"" + l.color + "\">" + escape(l.legend) + "</text>\n";
        ly += 14;
    }
    s += "</svg>\n";
    return s;
}

}  // namespace arps::svg
