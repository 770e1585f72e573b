#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace hetren::svg {

struct Series {
    std::string name;
    std::string color;
    std::vector<double> values;  // indexed by k; nonpositive/nan points are skipped
};

// Self-contained log-scale line chart (value vs schedule index k).
inline std::string log_chart(const std::string& title, const std::vector<Series>& series) {
    const double W = 720, H = 440, L = 70, R = 24, T = 40, B = 48;
    double lo = 0, hi = 0;
    bool any = false;
    size_t n = 0;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            if (!(v > 0) || std::isnan(v)) continue;
            double lg = std::log10(v);
            if (!any) { lo = hi = lg; any = true; }
            lo = std::min(lo, lg);
            hi = std::max(hi, lg);
        }
    }
    if (!any) { lo = -1; hi = 1; }
    lo = std::floor(lo) - 0.2;
    hi = std::ceil(hi) + 0.2;

    auto xpos = [&](size_t k) {
        return n <= 1 ? L + (W - L - R) / 2 : L + (W - L - R) * (double(k) / double(n - 1));
    };
    auto ypos = [&](double lg) { return T + (H - T - B) * (hi - lg) / (hi - lo); };
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
          "font-family=\"sans-serif\">" << title << "</text>\n";

    for (int e = int(std::ceil(lo)); e <= int(std::floor(hi)); ++e) {
        double y = ypos(e);
        os << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">1e" << e
           << "</text>\n";
    }
    for (size_t k = 0; k < n; ++k) {
        double x = xpos(k);
        os << "<text x=\"" << x << "\" y=\"" << H - B + 18
           << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << k
           << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10
       << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">k</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";

    double ly = T + 8;
    for (const auto& s : series) {
        std::ostringstream pts;
        bool first = true;
        for (size_t k = 0; k < s.values.size(); ++k) {
            double v = s.values[k];
            if (!(v > 0) || std::isnan(v)) continue;
            pts << (first ? "" : " ") << fmt(xpos(k)) << "," << fmt(ypos(std::log10(v)));
            first = false;
        }
        if (!first)
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\""
               << pts.str() << "\"/>\n";
        os << "<rect x=\"" << W - R - 190 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"4\" fill=\""
           << s.color << "\"/>\n";
        os << "<text x=\"" << W - R - 172 << "\" y=\"" << ly - 3
           << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.name << "</text>\n";
        ly += 16;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace hetren::svg
