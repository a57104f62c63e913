#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tailsitter::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

// Horizontal reference line drawn dotted, e.g. actuator limits.
struct RefLine {
  double y = 0.0;
  std::string label;
};

struct Panel {
  std::string y_label;
  std::vector<Series> series;
  std::vector<RefLine> ref_lines;
};

// Vertically stacked panels sharing the x axis. Non-finite samples break the line.
void write_figure(std::ostream& out, const std::string& title, const std::string& x_label,
                  const std::vector<Panel>& panels);

}  // namespace tailsitter::svg
