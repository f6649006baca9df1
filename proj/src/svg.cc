/*
 * Copyright 2026 The tncpt Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tncpt/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tncpt {

std::string SvgNum(double v) {
  if (!std::isfinite(v)) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string SvgEscape(std::string_view s) {
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

std::string RampColor(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.5, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(30 + 200 * t));
  const int g = static_cast<int>(std::lround(100 - 60 * std::abs(t - 0.5)));
  const int b = static_cast<int>(std::lround(230 - 200 * t));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

SvgDoc::SvgDoc(int width, int height) : width_(width), height_(height) {}

void SvgDoc::Rect(double x, double y, double w, double h, std::string_view fill) {
  body_ += "<rect x=\"" + SvgNum(x) + "\" y=\"" + SvgNum(y) + "\" width=\"" + SvgNum(w) +
           "\" height=\"" + SvgNum(h) + "\" fill=\"" + std::string(fill) + "\"/>\n";
}

void SvgDoc::Line(double x1, double y1, double x2, double y2, std::string_view stroke,
                  double width, bool dashed) {
  body_ += "<line x1=\"" + SvgNum(x1) + "\" y1=\"" + SvgNum(y1) + "\" x2=\"" +
           SvgNum(x2) + "\" y2=\"" + SvgNum(y2) + "\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + SvgNum(width) + "\"" +
           (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
}

void SvgDoc::Polyline(const std::vector<std::pair<double, double>>& pts,
                      std::string_view stroke, double width, bool dashed) {
  if (pts.size() < 2) return;
  std::string p;
  for (const auto& [x, y] : pts) {
    if (!p.empty()) p += ' ';
    p += SvgNum(x) + "," + SvgNum(y);
  }
  body_ += "<polyline points=\"" + p + "\" fill=\"none\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"" + SvgNum(width) + "\"" +
           (dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
}

void SvgDoc::Polygon(const std::vector<std::pair<double, double>>& pts,
                     std::string_view fill, std::string_view stroke) {
  if (pts.size() < 3) return;
  std::string p;
  for (const auto& [x, y] : pts) {
    if (!p.empty()) p += ' ';
    p += SvgNum(x) + "," + SvgNum(y);
  }
  body_ += "<polygon points=\"" + p + "\" fill=\"" + std::string(fill) + "\" stroke=\"" +
           std::string(stroke) + "\" stroke-width=\"0.5\"/>\n";
}

void SvgDoc::Circle(double cx, double cy, double r, std::string_view fill) {
  body_ += "<circle cx=\"" + SvgNum(cx) + "\" cy=\"" + SvgNum(cy) + "\" r=\"" + SvgNum(r) +
           "\" fill=\"" + std::string(fill) + "\"/>\n";
}

void SvgDoc::Text(double x, double y, std::string_view text, int size,
                  std::string_view anchor) {
  body_ += "<text x=\"" + SvgNum(x) + "\" y=\"" + SvgNum(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           std::to_string(size) + "\" text-anchor=\"" + std::string(anchor) + "\">" +
           SvgEscape(text) + "</text>\n";
}

std::string SvgDoc::Str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width_) + "\" height=\"" + std::to_string(height_) +
         "\" viewBox=\"0 0 " + std::to_string(width_) + " " + std::to_string(height_) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n" + body_ +
         "</svg>\n";
}

}  // namespace tncpt
