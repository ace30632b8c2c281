// emit.hpp: CSV and SVG rendering of result tables, plus the file sink.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinyield/scenario.hpp"

namespace spinyield::emit {

// Output-side failures (unwritable paths, full disks). The CLI maps this
// to exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// '#'-prefixed metadata, one header row, then %.12g data rows. LF line
// endings and no timing information, so repeated runs emit the same bytes.
inline std::string csv_text(const scenario::ResultTable& table) {
    std::string out;
    for (const std::string& line : table.meta) out += "# " + line + "\n";
    out += "theta_rad,theta_deg,phi_s,phi_p,phi_c\n";
    for (const closed::YieldRecord& r : table.rows) {
        out += scenario::g12(r.theta);
        out += ',';
        out += scenario::g12(r.theta * 180 / M_PI);
        out += ',';
        out += scenario::g12(r.phi_s);
        out += ',';
        out += scenario::g12(r.phi_p);
        out += ',';
        out += scenario::g12(r.phi_c);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::string fmt2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string fmt_tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

}  // namespace detail

// One polyline per yield column over the angle axis in degrees. Everything
// is plain SVG 1.1 with quoted attributes; labels are run labels, which the
// config layer restricts to filename-safe characters.
inline std::string svg_text(const scenario::ResultTable& table) {
    const double width = 720, height = 480;
    const double ml = 76, mr = 24, mt = 44, mb = 58;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;

    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (!table.rows.empty()) {
        x_lo = x_hi = table.rows.front().theta * 180 / M_PI;
        y_lo = y_hi = table.rows.front().phi_s;
        for (const closed::YieldRecord& r : table.rows) {
            double deg = r.theta * 180 / M_PI;
            x_lo = std::min(x_lo, deg);
            x_hi = std::max(x_hi, deg);
            for (double y : {r.phi_s, r.phi_p, r.phi_c}) {
                y_lo = std::min(y_lo, y);
                y_hi = std::max(y_hi, y);
            }
        }
    }
    if (x_hi - x_lo < 1e-12) {
        x_lo -= 1;
        x_hi += 1;
    }
    double pad = (y_hi - y_lo) * 0.05;
    if (pad < 1e-12) pad = 0.05;
    y_lo -= pad;
    y_hi += pad;

    auto px = [&](double deg) { return ml + (deg - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    using detail::fmt2;
    using detail::fmt_tick;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt2(ml) + "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"15\" fill=\"black\">" + table.label + "</text>\n";

    // frame
    s += "<rect x=\"" + fmt2(ml) + "\" y=\"" + fmt2(mt) + "\" width=\"" + fmt2(plot_w) +
         "\" height=\"" + fmt2(plot_h) + "\" fill=\"none\" stroke=\"#333333\"/>\n";

    const int ticks = 6;
    for (int i = 0; i < ticks; ++i) {
        double f = i / double(ticks - 1);
        double xv = x_lo + f * (x_hi - x_lo);
        double yv = y_lo + f * (y_hi - y_lo);
        double xp = px(xv), yp = py(yv);
        s += "<line x1=\"" + fmt2(xp) + "\" y1=\"" + fmt2(mt + plot_h) + "\" x2=\"" +
             fmt2(xp) + "\" y2=\"" + fmt2(mt + plot_h + 5) + "\" stroke=\"#333333\"/>\n";
        s += "<text x=\"" + fmt2(xp) + "\" y=\"" + fmt2(mt + plot_h + 20) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\" "
             "text-anchor=\"middle\">" + fmt_tick(xv) + "</text>\n";
        s += "<line x1=\"" + fmt2(ml - 5) + "\" y1=\"" + fmt2(yp) + "\" x2=\"" +
             fmt2(ml) + "\" y2=\"" + fmt2(yp) + "\" stroke=\"#333333\"/>\n";
        s += "<text x=\"" + fmt2(ml - 9) + "\" y=\"" + fmt2(yp + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\" "
             "text-anchor=\"end\">" + fmt_tick(yv) + "</text>\n";
    }
    s += "<text x=\"" + fmt2(ml + plot_w / 2) + "\" y=\"" + fmt2(height - 14) +
         "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"black\" "
         "text-anchor=\"middle\">theta (degrees)</text>\n";
    s += "<text x=\"20\" y=\"" + fmt2(mt + plot_h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"black\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 " + fmt2(mt + plot_h / 2) +
         ")\">yield</text>\n";

    const char* colors[3] = {"#2f6fb0", "#c23b3b", "#3f9b57"};
    const char* names[3] = {"phi_s", "phi_p", "phi_c"};
    for (int c = 0; c < 3; ++c) {
        std::string points;
        for (const closed::YieldRecord& r : table.rows) {
            double y = c == 0 ? r.phi_s : (c == 1 ? r.phi_p : r.phi_c);
            points += fmt2(px(r.theta * 180 / M_PI)) + "," + fmt2(py(y)) + " ";
        }
        if (!points.empty()) points.pop_back();
        s += "<polyline fill=\"none\" stroke=\"";
        s += colors[c];
        s += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        double lx = ml + plot_w - 150, ly = mt + 16 + 18 * c;
        s += "<line x1=\"" + fmt2(lx) + "\" y1=\"" + fmt2(ly - 4) + "\" x2=\"" +
             fmt2(lx + 24) + "\" y2=\"" + fmt2(ly - 4) + "\" stroke=\"";
        s += colors[c];
        s += "\" stroke-width=\"1.5\"/>\n";
        s += "<text x=\"" + fmt2(lx + 30) + "\" y=\"" + fmt2(ly) +
             "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">";
        s += names[c];
        s += "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace spinyield::emit
