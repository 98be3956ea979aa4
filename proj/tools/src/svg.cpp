// SPDX-License-Identifier: Apache-2.0
#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace winnbeta::cli::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
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

struct Frame {
    double x0, x1, y0, y1;
    [[nodiscard]] double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    [[nodiscard]] double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void header(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";
}

void y_axis(std::ostringstream& out, const Frame& f, const std::string& label, int ticks) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= ticks; ++i) {
        const double v = f.y0 + (f.y1 - f.y0) * i / ticks;
        const double y = f.py(v);
        out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(y)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 7 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(v)
            << "</text>\n";
    }
    out << "<text transform=\"translate(18," << (kTop + kHeight - kBottom) / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(label) << "</text>\n";
}

}  // namespace

std::string cdf_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<Curve>& curves) {
    const Frame f{0.0, 1.0, 0.0, 1.0};
    std::ostringstream out;
    header(out, title);
    y_axis(out, f, y_label, 5);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 10; ++i) {
        const double x = f.px(i / 10.0);
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << fmt(x) << "\" y2=\""
            << kHeight - kBottom + 4 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(x) << "\" y=\"" << kHeight - kBottom + 17 << "\" text-anchor=\"middle\">"
            << fmt(i / 10.0) << "</text>\n";
    }
    out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& curve = curves[c];
        out << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << curve.color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            if (i) out << ' ' << fmt(f.px(curve.x[i])) << ',' << fmt(f.py(curve.y[i - 1]));
            out << (i ? " " : "") << fmt(f.px(curve.x[i])) << ',' << fmt(f.py(curve.y[i]));
        }
        out << "\"/>\n";
        const double ly = kTop + 10 + 18.0 * static_cast<double>(c);
        out << "<line x1=\"" << kLeft + 15 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + 40 << "\" y2=\"" << ly
            << "\" stroke=\"" << curve.color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kLeft + 46 << "\" y=\"" << ly + 4 << "\">" << escape(curve.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string box_plot(const std::string& title, const std::string& y_label, const std::vector<Box>& boxes) {
    double lo = 0.0, hi = 0.0;
    for (const auto& b : boxes) {
        lo = std::min({lo, b.whisker_low, b.q1});
        hi = std::max({hi, b.whisker_high, b.q3});
    }
    const double pad = (hi - lo) > 0 ? 0.08 * (hi - lo) : 1.0;
    const Frame f{0.0, static_cast<double>(boxes.size()), lo - pad, hi + pad};

    std::ostringstream out;
    header(out, title);
    y_axis(out, f, y_label, 6);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(f.py(0)) << "\" x2=\"" << kWidth - kRight << "\" y2=\""
        << fmt(f.py(0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        const double cx = f.px(static_cast<double>(i) + 0.5);
        const double half = 0.18 * (f.px(1) - f.px(0));
        out << "<g class=\"box\">\n"
            << "<line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(f.py(b.whisker_low)) << "\" x2=\"" << fmt(cx)
            << "\" y2=\"" << fmt(f.py(b.whisker_high)) << "\" stroke=\"black\"/>\n"
            << "<rect x=\"" << fmt(cx - half) << "\" y=\"" << fmt(f.py(b.q3)) << "\" width=\"" << fmt(2 * half)
            << "\" height=\"" << fmt(std::max(0.5, f.py(b.q1) - f.py(b.q3)))
            << "\" fill=\"#cfe0f3\" stroke=\"black\"/>\n"
            << "<line x1=\"" << fmt(cx - half) << "\" y1=\"" << fmt(f.py(b.median)) << "\" x2=\"" << fmt(cx + half)
            << "\" y2=\"" << fmt(f.py(b.median)) << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
        for (double w : {b.whisker_low, b.whisker_high}) {
            out << "<line x1=\"" << fmt(cx - half / 2) << "\" y1=\"" << fmt(f.py(w)) << "\" x2=\""
                << fmt(cx + half / 2) << "\" y2=\"" << fmt(f.py(w)) << "\" stroke=\"black\"/>\n";
        }
        out << "<text x=\"" << fmt(cx) << "\" y=\"" << kHeight - kBottom + 20 << "\" text-anchor=\"middle\">"
            << escape(b.label) << "</text>\n</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace winnbeta::cli::svg
