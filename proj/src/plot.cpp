#include "tiqflash/plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tiqflash/error.hpp"

namespace tiqflash {

namespace {

struct Range {
    double lo;
    double hi;
};

Range padded(double lo, double hi) {
    if (hi <= lo) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    return {lo, hi};
}

class SvgPlot {
public:
    static constexpr double kWidth = 640.0;
    static constexpr double kHeight = 400.0;
    static constexpr double kLeft = 70.0;
    static constexpr double kRight = 20.0;
    static constexpr double kTop = 40.0;
    static constexpr double kBottom = 50.0;

    SvgPlot(Range x, Range y) : x_(padded(x.lo, x.hi)), y_(padded(y.lo, y.hi)) {}

    double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double y) const {
        return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
    }

    void axes(const std::string& title, const std::string& x_label, const std::string& y_label) {
        body_ += fmt::format(
            "<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            kWidth / 2, title);
        body_ += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n", kLeft,
            kHeight - kBottom, kWidth - kRight);
        body_ += fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", kLeft,
            kTop, kHeight - kBottom);
        for (int i = 0; i <= 4; ++i) {
            const double xv = x_.lo + (x_.hi - x_.lo) * i / 4.0;
            const double yv = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            body_ += fmt::format(
                "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"11\">{:.4g}</text>\n",
                px(xv), kHeight - kBottom + 16, xv);
            body_ += fmt::format(
                "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-size=\"11\">{:.4g}</text>\n",
                kLeft - 6, py(yv) + 4, yv);
        }
        body_ += fmt::format(
            "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
            kWidth / 2, kHeight - 12, x_label);
        body_ += fmt::format(
            "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" font-size=\"13\" "
            "transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
            kHeight / 2, y_label);
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const char* colour) {
        std::string points;
        for (const auto& [x, y] : pts) points += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
        if (!points.empty()) points.pop_back();
        body_ += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                             colour, points);
    }

    void marker(double x, double y, const char* colour) {
        body_ += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(x), py(y), colour);
    }

    void bar(double x0, double x1, double y, const char* colour) {
        const double base = py(std::clamp(0.0, y_.lo, y_.hi));
        const double top = py(y);
        body_ += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                             px(x0), std::min(base, top), std::max(px(x1) - px(x0), 0.5),
                             std::abs(base - top), colour);
    }

    std::string render() const {
        return fmt::format(
                   "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
                   "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\">\n"
                   "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
                   kWidth, kHeight, kWidth, kHeight) +
               body_ + "</svg>\n";
    }

private:
    Range x_;
    Range y_;
    std::string body_;
};

}  // namespace

std::string staircase_svg(const std::vector<TraceRow>& rows) {
    if (rows.empty()) throw Error(ErrorCode::parse_error, "staircase plot needs at least one trace row");
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TraceRow& a, const TraceRow& b) { return a.v_in < b.v_in; });
    double code_max = 0.0;
    for (const auto& r : sorted) code_max = std::max(code_max, static_cast<double>(r.code));

    SvgPlot plot({sorted.front().v_in, sorted.back().v_in}, {0.0, code_max});
    plot.axes("Transfer staircase", "input voltage (V)", "output code");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double code = sorted[i].code;
        if (i > 0) pts.emplace_back(sorted[i].v_in, static_cast<double>(sorted[i - 1].code));
        pts.emplace_back(sorted[i].v_in, code);
    }
    plot.polyline(pts, "steelblue");
    return plot.render();
}

std::string dnl_svg(const std::vector<double>& dnl) {
    if (dnl.empty()) throw Error(ErrorCode::parse_error, "DNL plot needs at least one value");
    double lo = 0.0;
    double hi = 0.0;
    for (double d : dnl) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    const double bound = std::max({std::abs(lo), std::abs(hi), 0.5});
    SvgPlot plot({0.0, static_cast<double>(dnl.size())}, {-bound, bound});
    plot.axes("Differential non-linearity", "code transition", "DNL (LSB)");
    for (std::size_t i = 0; i < dnl.size(); ++i) {
        plot.bar(static_cast<double>(i) + 0.1, static_cast<double>(i) + 0.9, dnl[i], "darkorange");
    }
    return plot.render();
}

std::string drift_svg(const DriftReport& report) {
    if (report.entries.empty()) throw Error(ErrorCode::parse_error, "drift plot needs at least one temperature");
    auto entries = report.entries;
    std::stable_sort(entries.begin(), entries.end(),
                     [](const DriftEntry& a, const DriftEntry& b) { return a.t_c < b.t_c; });
    double hi = 0.0;
    for (const auto& e : entries) hi = std::max(hi, e.max_ref_shift * 1e3);
    SvgPlot plot({entries.front().t_c, entries.back().t_c}, {0.0, hi});
    plot.axes("Threshold drift", "temperature (degC)", "max threshold shift (mV)");
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : entries) pts.emplace_back(e.t_c, e.max_ref_shift * 1e3);
    plot.polyline(pts, "firebrick");
    for (const auto& [x, y] : pts) plot.marker(x, y, "firebrick");
    return plot.render();
}

}  // namespace tiqflash
