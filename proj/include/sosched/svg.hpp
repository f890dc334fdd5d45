#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace sosched::svg {

struct Point {
  double x = 0.0, y = 0.0;
  double spread = std::nan("");  // ±1 std band, NaN for none
};

struct Series {
  std::string name;
  std::vector<Point> points;
};

namespace detail {

inline const char* color(std::size_t k) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return palette[k % 8];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double left = 70, right = 170, top = 40, bottom = 50, width = 720, height = 420;

  double px(double x) const { return left + (x1 == x0 ? 0.5 : (x - x0) / (x1 - x0)) * (width - left - right); }
  double py(double y) const { return height - bottom - (y1 == y0 ? 0.5 : (y - y0) / (y1 - y0)) * (height - top - bottom); }
};

inline void axes(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& xlab,
                 const std::string& ylab) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  const double xa = f.left, xb = f.width - f.right, ya = f.height - f.bottom, yb = f.top;
  os << "<line x1=\"" << xa << "\" y1=\"" << ya << "\" x2=\"" << xb << "\" y2=\"" << ya << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << xa << "\" y1=\"" << ya << "\" x2=\"" << xa << "\" y2=\"" << yb << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double yv = f.y0 + (f.y1 - f.y0) * k / 4.0, y = f.py(yv);
    os << "<line x1=\"" << xa - 4 << "\" y1=\"" << num(y) << "\" x2=\"" << xa << "\" y2=\"" << num(y)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << xa - 7 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << label(yv) << "</text>\n";
  }
  os << "<text x=\"" << (xa + xb) / 2 << "\" y=\"" << f.height - 12 << "\" text-anchor=\"middle\">" << escape(xlab)
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << (ya + yb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (ya + yb) / 2
     << ")\">" << escape(ylab) << "</text>\n";
}

}  // namespace detail

// Line plot with optional shaded ±spread bands and a legend.
inline std::string line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlab,
                             const std::string& ylab) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      const double d = std::isnan(p.spread) ? 0.0 : p.spread;
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y - d);
      y1 = std::max(y1, p.y + d);
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (y0 == y1) y0 -= 0.5, y1 += 0.5;
  detail::Frame f{x0, x1, y0, y1};
  std::ostringstream os;
  detail::axes(os, f, title, xlab, ylab);

  std::vector<double> xs;
  for (const auto& s : series)
    for (const auto& p : s.points) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (double x : xs)
    os << "<text x=\"" << detail::num(f.px(x)) << "\" y=\"" << f.height - f.bottom + 16
       << "\" text-anchor=\"middle\">" << detail::label(x) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    auto pts = series[k].points;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    const char* c = detail::color(k);
    const bool band = !pts.empty() && std::all_of(pts.begin(), pts.end(), [](const Point& p) { return !std::isnan(p.spread); });
    if (band) {
      os << "<polygon fill=\"" << c << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (const auto& p : pts) os << detail::num(f.px(p.x)) << ',' << detail::num(f.py(p.y + p.spread)) << ' ';
      for (auto it = pts.rbegin(); it != pts.rend(); ++it)
        os << detail::num(f.px(it->x)) << ',' << detail::num(f.py(it->y - it->spread)) << ' ';
      os << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) os << detail::num(f.px(p.x)) << ',' << detail::num(f.py(p.y)) << ' ';
    os << "\"/>\n";
    for (const auto& p : pts)
      os << "<circle cx=\"" << detail::num(f.px(p.x)) << "\" cy=\"" << detail::num(f.py(p.y)) << "\" r=\"3\" fill=\"" << c
         << "\"/>\n";
    const double ly = f.top + 18.0 * static_cast<double>(k);
    const double lx = f.width - f.right + 15;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly << "\" stroke=\"" << c
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">" << detail::escape(series[k].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Bar chart of a histogram (category -> value).
inline std::string bar_plot(const std::map<std::size_t, double>& bars, const std::string& title, const std::string& xlab,
                            const std::string& ylab) {
  double top = 0.0;
  for (const auto& [k, v] : bars) top = std::max(top, v);
  if (top <= 0.0) top = 1.0;
  const double lo = bars.empty() ? 0.0 : static_cast<double>(bars.begin()->first) - 0.5;
  const double hi = bars.empty() ? 1.0 : static_cast<double>(bars.rbegin()->first) + 0.5;
  detail::Frame f{lo, hi, 0.0, top};
  f.right = 40;
  std::ostringstream os;
  detail::axes(os, f, title, xlab, ylab);
  const double w = std::max(1.0, (f.px(lo + 1.0) - f.px(lo)) * 0.8);
  for (const auto& [k, v] : bars) {
    const double cx = f.px(static_cast<double>(k));
    os << "<rect x=\"" << detail::num(cx - w / 2) << "\" y=\"" << detail::num(f.py(v)) << "\" width=\"" << detail::num(w)
       << "\" height=\"" << detail::num(f.py(0.0) - f.py(v)) << "\" fill=\"" << detail::color(0) << "\"/>\n";
    os << "<text x=\"" << detail::num(cx) << "\" y=\"" << f.height - f.bottom + 16 << "\" text-anchor=\"middle\">" << k
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace sosched::svg
