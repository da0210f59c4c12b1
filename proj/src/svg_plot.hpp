#pragma once

#include <span>
#include <string>
#include <vector>

namespace arps::svg {

/// Minimal 2-D line/scatter chart rendered as a standalone SVG document.
/// Element classes are stable so callers (and tests) can find marks and
/// reference lines: "mark", "trace", "ref-eps", "ref-eps-half", "ref-Tc".
class Plot {
public:
    Plot(std::string title, std::string x_label, std::string y_label);

    void set_x_range(double lo, double hi, bool log_scale = false);
    void set_y_range(double lo, double hi, bool log_scale = false);

    void add_line(std::span<const double> xs, std::span<const double> ys, std::string color,
                  bool dashed, std::string css_class, std::string legend);
    void add_mark(double x, double y, std::string color, std::string css_class = "mark");
    void add_hline(double y, std::string label, std::string css_class);
    void add_vline(double x, std::string label, std::string css_class);

    double px(double x) const;
    double py(double y) const;

    std::string render() const;

    static constexpr double kWidth = 800.0;
    static constexpr double kHeight = 500.0;
    static constexpr double kLeft = 80.0;
    static constexpr double kRight = 30.0;
    static constexpr double kTop = 40.0;
    static constexpr double kBottom = 60.0;

private:
    struct Axis {
        double lo = 0.0;
        double hi = 1.0;
        bool log = false;
        bool set = false;
    };
    struct Line {
        std::vector<double> xs, ys;
        std::string color, css_class, legend;
        bool dashed = false;
    };
    struct Mark {
        double x, y;
        std::string color, css_class;
    };
    struct RefLine {
        double value;
        std::string label, css_class;
        bool horizontal;
    };

    void autorange();
    static double to_unit(const Axis& a, double v);

    std::string title_, x_label_, y_label_;
    Axis x_, y_;
    std::vector<Line> lines_;
    std::vector<Mark> marks_;
    std::vector<RefLine> refs_;
};

const std::vector<std::string>& palette();

}  // namespace arps::svg
