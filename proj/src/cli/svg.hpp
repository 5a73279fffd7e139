#pragma once

#include <string>
#include <vector>

namespace ssadr::cli::svg {

struct Bar {
  double low;
  double high;
  double value;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
};

std::string bar_chart(const std::vector<Bar>& bars, const std::string& title,
                      const std::string& x_label);
std::string line_chart(const std::vector<Series>& series,
                       const std::string& title, const std::string& y_label);

}  // namespace ssadr::cli::svg
