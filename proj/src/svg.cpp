#include "ued/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ued {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 320.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 32.0;
constexpr double kBottom = 40.0;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_arc_svg(const EmotionArc& arc, std::string_view title, std::size_t max_points) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double t) { return kLeft + t * plot_w; };
  auto py = [&](double s) { return kTop + (1.0 - s) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << xml_escape(title) << "</text>\n";
  svg << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(plot_w)
      << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg << "<line x1=\"" << fixed(px(tick)) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\"" << fixed(px(tick))
        << "\" y2=\"" << fixed(kTop + plot_h + 4) << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << fixed(px(tick)) << "\" y=\"" << fixed(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fixed(tick) << "</text>\n";
    svg << "<line x1=\"" << fixed(kLeft - 4) << "\" y1=\"" << fixed(py(tick)) << "\" x2=\"" << fixed(kLeft)
        << "\" y2=\"" << fixed(py(tick)) << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(tick) + 3)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fixed(tick) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 6)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">narrative time</text>\n";
  svg << "<text x=\"14\" y=\"" << fixed(kTop + plot_h / 2) << "\" transform=\"rotate(-90 14 "
      << fixed(kTop + plot_h / 2) << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
      << to_string(arc.dimension) << "</text>\n";

  svg << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.2\" points=\"";
  const std::size_t n = arc.size();
  if (n == 1) {
    svg << fixed(px(0.0)) << ',' << fixed(py(arc.states[0])) << ' ' << fixed(px(1.0)) << ','
        << fixed(py(arc.states[0]));
  } else if (n > 1) {
    const std::size_t points = std::min(n, std::max<std::size_t>(max_points, 2));
    for (std::size_t k = 0; k < points; ++k) {
      const std::size_t i = k * (n - 1) / (points - 1);
      if (k) svg << ' ';
      svg << fixed(px(arc.times[i])) << ',' << fixed(py(arc.states[i]));
    }
  }
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

}  // namespace ued
