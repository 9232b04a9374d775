#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <string>
#include <vector>

namespace polylim {

// Minimal SVG emitter; the viewbox is fitted to the reference points with a
// small margin. Stroke widths and radii are in viewbox units.
class SvgWriter {
 public:
  SvgWriter(const std::string& path,
            const std::vector<Eigen::Vector2d>& reference_points,
            bool reproducible = true);
  ~SvgWriter();

  void polygon(const std::vector<Eigen::Vector2d>& pts,
               const std::string& fill, const std::string& stroke,
               double stroke_width);
  void dot(const Eigen::Vector2d& p, double radius, const std::string& fill);
  void comment(const std::string& text);
  void finish();

 private:
  std::ofstream out_;
  double scale_ = 1.0;
  bool finished_ = false;
};

}  // namespace polylim
