#include "polylim/svg.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace polylim {

SvgWriter::SvgWriter(const std::string& path,
                     const std::vector<Eigen::Vector2d>& reference_points,
                     bool reproducible)
    : out_(path) {
  if (!out_) throw std::runtime_error("SvgWriter: cannot open " + path);
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  if (!reference_points.empty()) {
    xmin = ymin = std::numeric_limits<double>::infinity();
    xmax = ymax = -xmin;
    for (const auto& p : reference_points) {
      xmin = std::min(xmin, p.x());
      xmax = std::max(xmax, p.x());
      ymin = std::min(ymin, p.y());
      ymax = std::max(ymax, p.y());
    }
  }
  const double mx = 0.05 * (xmax - xmin + 1e-12);
  const double my = 0.05 * (ymax - ymin + 1e-12);
  xmin -= mx; xmax += mx; ymin -= my; ymax += my;
  scale_ = std::max(xmax - xmin, ymax - ymin);
  out_.precision(10);
  out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
          "height=\"640\" viewBox=\"" << xmin << " " << -ymax << " "
       << (xmax - xmin) << " " << (ymax - ymin) << "\">\n";
  if (!reproducible) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    out_ << "<!-- generated "
         << std::chrono::duration_cast<std::chrono::seconds>(now).count()
         << " -->\n";
  }
}

SvgWriter::~SvgWriter() {
  if (!finished_) finish();
}

void SvgWriter::polygon(const std::vector<Eigen::Vector2d>& pts,
                        const std::string& fill, const std::string& stroke,
                        double stroke_width) {
  out_ << "<polygon points=\"";
  for (const auto& p : pts) out_ << p.x() << "," << -p.y() << " ";
  out_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke
       << "\" stroke-width=\"" << stroke_width * scale_ << "\"/>\n";
}

void SvgWriter::dot(const Eigen::Vector2d& p, double radius,
                    const std::string& fill) {
  out_ << "<circle cx=\"" << p.x() << "\" cy=\"" << -p.y() << "\" r=\""
       << radius * scale_ << "\" fill=\"" << fill << "\"/>\n";
}

void SvgWriter::comment(const std::string& text) {
  out_ << "<!-- " << text << " -->\n";
}

void SvgWriter::finish() {
  if (!finished_) {
    out_ << "</svg>\n";
    finished_ = true;
  }
}

}  // namespace polylim
