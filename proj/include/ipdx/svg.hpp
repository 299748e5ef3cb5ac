#ifndef IPDX_SVG_HPP
#define IPDX_SVG_HPP

#include <string>
#include <utility>
#include <vector>

#include "ipdx/phase_atlas.hpp"

namespace ipdx {
namespace svg {

struct Style {
  std::string stroke = "none";
  double stroke_width = 1.0;
  std::string fill = "none";
  double opacity = 1.0;
};

// Minimal self-contained SVG scene: inline styles, no external assets.
class Document {
 public:
  Document(double width, double height);

  void line(double x1, double y1, double x2, double y2, const Style& st);
  void polyline(const std::vector<std::pair<double, double>>& pts, const Style& st);
  void circle(double cx, double cy, double r, const Style& st);
  void rect(double x, double y, double w, double h, const Style& st);
  void text(double x, double y, const std::string& s, double size,
            const std::string& anchor = "middle");

  std::string str() const;

 private:
  double width_, height_;
  std::string body_;
};

}  // namespace svg

// Phase portrait: simplex outline, seed trajectories, fixed points drawn
// solid when asymptotically stable and open otherwise.
std::string portrait_svg(const Portrait& p);

// Region map over the swept parameter window, one coloured cell per sample.
std::string atlas_svg(const AtlasGrid& grid);

}  // namespace ipdx

#endif  // IPDX_SVG_HPP
