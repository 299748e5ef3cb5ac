#include "ipdx/svg.hpp"

#include <cmath>
#include <sstream>

#include "ipdx/serialize.hpp"

namespace ipdx {
namespace svg {

namespace {

std::string num(double v) {
  // Two decimals are plenty at canvas scale and keep files small.
  const double r = std::round(v * 100.0) / 100.0;
  std::string s = format_double(r);
  return s;
}

std::string style_attr(const Style& st) {
  std::ostringstream os;
  os << " stroke=\"" << st.stroke << "\" stroke-width=\"" << num(st.stroke_width)
     << "\" fill=\"" << st.fill << "\"";
  if (st.opacity != 1.0) os << " opacity=\"" << num(st.opacity) << "\"";
  return os.str();
}

}  // namespace

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::line(double x1, double y1, double x2, double y2, const Style& st) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
           "\" y2=\"" + num(y2) + "\"" + style_attr(st) + "/>\n";
}

void Document::polyline(const std::vector<std::pair<double, double>>& pts, const Style& st) {
  if (pts.size() < 2) return;
  std::string attr = "<polyline points=\"";
  for (const auto& [x, y] : pts) attr += num(x) + "," + num(y) + " ";
  body_ += attr + "\"" + style_attr(st) + "/>\n";
}

void Document::circle(double cx, double cy, double r, const Style& st) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\"" +
           style_attr(st) + "/>\n";
}

void Document::rect(double x, double y, double w, double h, const Style& st) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\"" + style_attr(st) + "/>\n";
}

void Document::text(double x, double y, const std::string& s, double size,
                    const std::string& anchor) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
           "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

std::string Document::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\""
     << num(height_) << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_)
     << "\" fill=\"white\"/>\n"
     << body_ << "</svg>\n";
  return os.str();
}

}  // namespace svg

namespace {

constexpr double kCanvas = 640.0;
constexpr double kMargin = 60.0;

const char* region_color(Region r) {
  switch (r) {
    case Region::I: return "#4e79a7";
    case Region::II: return "#f28e2b";
    case Region::III: return "#e15759";
    case Region::IV: return "#76b7b2";
    case Region::V: return "#59a14f";
    case Region::VI: return "#edc948";
    case Region::VII: return "#b07aa1";
    case Region::VIII: return "#ff9da7";
    case Region::IX: return "#9c755f";
    case Region::X: return "#bab0ac";
    case Region::boundary: return "#202020";
  }
  return "#ffffff";
}

}  // namespace

std::string portrait_svg(const Portrait& p) {
  svg::Document doc(kCanvas, kCanvas);
  const double span = kCanvas - 2.0 * kMargin;

  const bool quad = p.strategy_count == 4;
  // Screen position of a reduced-coordinate point.
  auto place = [&](const std::vector<double>& x) -> std::pair<double, double> {
    if (!quad) {
      return {kMargin + span * x[0], kCanvas - kMargin - span * x[1]};
    }
    // Tetrahedron projected onto the page: outer triangle for the explicit
    // strategies, the loner vertex at the centroid.
    static const double cx[4] = {0.0, 0.5, 1.0, 0.5};
    static const double cy[4] = {0.0, std::sqrt(3.0) / 2.0, 0.0, std::sqrt(3.0) / 6.0};
    const double x4 = 1.0 - x[0] - x[1] - x[2];
    const double u = x[0] * cx[0] + x[1] * cx[1] + x[2] * cx[2] + x4 * cx[3];
    const double v = x[0] * cy[0] + x[1] * cy[1] + x[2] * cy[2] + x4 * cy[3];
    return {kMargin + span * u, kCanvas - kMargin - span * v};
  };

  const svg::Style frame{.stroke = "#202020", .stroke_width = 1.5, .fill = "none"};
  const svg::Style faint{.stroke = "#b0b0b0", .stroke_width = 1.0, .fill = "none"};
  if (!quad) {
    const auto o = place({0.0, 0.0});
    const auto ex = place({1.0, 0.0});
    const auto ey = place({0.0, 1.0});
    doc.line(o.first, o.second, ex.first, ex.second, frame);
    doc.line(o.first, o.second, ey.first, ey.second, frame);
    doc.line(ex.first, ex.second, ey.first, ey.second, frame);
    doc.text(ex.first + 18, ex.second + 5, "x1", 16);
    doc.text(ey.first, ey.second - 12, "x2", 16);
    doc.text(o.first - 12, o.second + 18, "0", 14);
  } else {
    const auto vc = place({1.0, 0.0, 0.0});
    const auto vd = place({0.0, 1.0, 0.0});
    const auto vs = place({0.0, 0.0, 1.0});
    const auto vb = place({0.0, 0.0, 0.0});
    doc.line(vc.first, vc.second, vd.first, vd.second, frame);
    doc.line(vd.first, vd.second, vs.first, vs.second, frame);
    doc.line(vs.first, vs.second, vc.first, vc.second, frame);
    doc.line(vc.first, vc.second, vb.first, vb.second, faint);
    doc.line(vd.first, vd.second, vb.first, vb.second, faint);
    doc.line(vs.first, vs.second, vb.first, vb.second, faint);
    doc.text(vc.first - 14, vc.second + 16, "C", 16);
    doc.text(vd.first, vd.second - 10, "D", 16);
    doc.text(vs.first + 14, vs.second + 16, "S", 16);
    doc.text(vb.first, vb.second + 22, "loner", 12);
  }

  const svg::Style path{.stroke = "#5b7fa6", .stroke_width = 1.0, .fill = "none", .opacity = 0.8};
  for (const auto& traj : p.trajectories) {
    const std::size_t stride = std::max<std::size_t>(1, traj.points.size() / 1500);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < traj.points.size(); i += stride) {
      pts.push_back(place(traj.points[i]));
    }
    pts.push_back(place(traj.points.back()));
    doc.polyline(pts, path);
  }

  for (const auto& fp : p.fixed_points) {
    if (!fp.exists_in_simplex) continue;
    const auto [px, py] = place(fp.location);
    const bool solid = fp.stability == Stability::asymptotically_stable;
    const svg::Style marker{.stroke = "#202020", .stroke_width = 1.5,
                            .fill = solid ? "#202020" : "white"};
    doc.circle(px, py, 6.0, marker);
  }
  return doc.str();
}

std::string atlas_svg(const AtlasGrid& grid) {
  svg::Document doc(kCanvas, kCanvas);
  const double span = kCanvas - 2.0 * kMargin;
  const std::size_t nb = grid.betas.size();
  const std::size_t nz = grid.zs.size();
  const double cw = span / nb;
  const double ch = span / nz;
  for (std::size_t zi = 0; zi < nz; ++zi) {
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const auto& label = grid.at(static_cast<int>(zi), static_cast<int>(bi));
      const svg::Style cell{.stroke = "none", .fill = region_color(label.region)};
      doc.rect(kMargin + bi * cw, kCanvas - kMargin - (zi + 1) * ch, cw + 0.5, ch + 0.5, cell);
    }
  }
  const svg::Style frame{.stroke = "#202020", .stroke_width = 1.5, .fill = "none"};
  doc.rect(kMargin, kMargin, span, span, frame);
  doc.text(kCanvas / 2.0, kCanvas - kMargin / 3.0, "beta", 16);
  doc.text(kMargin / 3.0, kCanvas / 2.0, "z", 16);
  doc.text(kMargin, kCanvas - kMargin + 18, format_double(grid.betas.front()), 11);
  doc.text(kCanvas - kMargin, kCanvas - kMargin + 18, format_double(grid.betas.back()), 11);
  doc.text(kMargin - 22, kCanvas - kMargin, format_double(grid.zs.front()), 11);
  doc.text(kMargin - 22, kMargin + 8, format_double(grid.zs.back()), 11);
  return doc.str();
}

}  // namespace ipdx
