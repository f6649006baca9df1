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

// Minimal deterministic SVG 1.1 writer for the report charts.

#ifndef TNCPT_SVG_H_
#define TNCPT_SVG_H_

#include <string>
#include <string_view>
#include <vector>

namespace tncpt {

class SvgDoc {
 public:
  SvgDoc(int width, int height);

  void Rect(double x, double y, double w, double h, std::string_view fill);
  void Line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double width = 1.0, bool dashed = false);
  void Polyline(const std::vector<std::pair<double, double>>& pts,
                std::string_view stroke, double width = 1.5, bool dashed = false);
  void Polygon(const std::vector<std::pair<double, double>>& pts,
               std::string_view fill, std::string_view stroke = "#ffffff");
  void Circle(double cx, double cy, double r, std::string_view fill);
  // anchor: "start", "middle" or "end".
  void Text(double x, double y, std::string_view text, int size = 12,
            std::string_view anchor = "start");

  std::string Str() const;

 private:
  int width_;
  int height_;
  std::string body_;
};

// Fixed two-decimal coordinate formatting.
std::string SvgNum(double v);
std::string SvgEscape(std::string_view s);

// Linear axis mapping; a degenerate domain maps to the range midpoint.
struct LinearScale {
  double d0, d1, r0, r1;
  double operator()(double v) const {
    if (d1 == d0) return (r0 + r1) / 2.0;
    return r0 + (v - d0) / (d1 - d0) * (r1 - r0);
  }
};

// Blue-to-red ramp for t in [0, 1].
std::string RampColor(double t);

}  // namespace tncpt

#endif  // TNCPT_SVG_H_
