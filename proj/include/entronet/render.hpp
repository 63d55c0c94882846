#pragma once

#include "entronet/affine.hpp"
#include "entronet/groupnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace entronet {

struct RenderOptions {
  double layer_height = 60;
  double strand_gap = 50;
  double font_size = 11;
  std::string additive_color = "#000000";
  std::string multiplicative_color = "#c0392b";
  std::string network_color = "#1f3a93";
  std::string dot_color = "#000000";

  void check() const {
    if (!(layer_height > 0 && strand_gap > 0 && font_size > 0))
      throw std::invalid_argument("render options need positive dimensions");
  }
};

namespace detail {

inline std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// One strand piece inside a band. style: 0 additive, 1 multiplicative, 2 network.
struct Segment {
  double x1, y1, x2, y2;
  int style = 0;
  int sign = 1;  // orientation for additive, co-orientation otherwise
  bool arc = false;
};

struct Band {
  std::vector<Segment> segments;
  bool marker = false;
  double mx = 0, my = 0;
  std::string label;
};

// Every band becomes exactly five elements: additive path, wavy path, tick path, marker circle, label.
class Canvas {
 public:
  Canvas(const RenderOptions& o, std::size_t width_strands, std::size_t layers) : o_(o) {
    o.check();
    margin_ = o.strand_gap;
    width_ = 2 * margin_ + std::max<std::size_t>(width_strands, 1) * o.strand_gap + 160;
    height_ = 2 * margin_ + static_cast<double>(layers) * o.layer_height + 2 * o.font_size;
  }

  double x(double i) const { return margin_ + i * o_.strand_gap; }
  double bottom(std::size_t k) const { return height_ - margin_ - static_cast<double>(k) * o_.layer_height; }
  double top(std::size_t k) const { return bottom(k + 1); }
  double mid(std::size_t k) const { return (bottom(k) + top(k)) / 2; }

  void add_band(const Band& b) { bands_.push_back(b); }

  std::string finish(const std::string& source_label, const std::string& target_label) const {
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fx(width_) << "\" height=\""
      << fx(height_) << "\" viewBox=\"0 0 " << fx(width_) << " " << fx(height_) << "\">\n";
    s << text(margin_, height_ - margin_ / 2, source_label) << "\n";
    s << text(margin_, margin_ / 2 + o_.font_size, target_label) << "\n";
    for (const auto& b : bands_) {
      std::string plain, wavy, ticks;
      std::string color = o_.additive_color;
      for (const auto& g : b.segments) {
        if (g.style == 1) {
          wavy += wave(g);
        } else {
          plain += piece(g);
          if (g.style == 2) color = o_.network_color;
        }
        ticks += tick(g);
      }
      s << "<path d=\"" << trim(plain) << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
      s << "<path d=\"" << trim(wavy) << "\" fill=\"none\" stroke=\"" << o_.multiplicative_color
        << "\" stroke-width=\"1.5\"/>\n";
      s << "<path d=\"" << trim(ticks) << "\" fill=\"none\" stroke=\"" << o_.additive_color << "\" stroke-width=\"1\"/>\n";
      s << "<circle cx=\"" << fx(b.mx) << "\" cy=\"" << fx(b.my) << "\" r=\"" << (b.marker ? "3.50" : "0.00")
        << "\" fill=\"" << o_.dot_color << "\"/>\n";
      s << text(x(0) + width_ - 2 * margin_ - 150, b.my + o_.font_size / 3, b.label) << "\n";
    }
    s << "</svg>\n";
    return s.str();
  }

 private:
  RenderOptions o_;
  double margin_, width_, height_;
  std::vector<Band> bands_;

  std::string text(double px, double py, const std::string& t) const {
    return "<text x=\"" + fx(px) + "\" y=\"" + fx(py) + "\" font-family=\"monospace\" font-size=\"" + fx(o_.font_size) +
           "\">" + xml_escape(t) + "</text>";
  }

  static std::string trim(const std::string& s) { return s.empty() ? s : s.substr(0, s.size() - 1); }

  std::string piece(const Segment& g) const {
    if (g.arc) {
      // y1 holds the endpoint level, y2 the apex level
      return "M" + fx(g.x1) + " " + fx(g.y1) + " C" + fx(g.x1) + " " + fx(g.y2) + " " + fx(g.x2) + " " + fx(g.y2) + " " +
             fx(g.x2) + " " + fx(g.y1) + " ";
    }
    return "M" + fx(g.x1) + " " + fx(g.y1) + " L" + fx(g.x2) + " " + fx(g.y2) + " ";
  }

  std::string wave(const Segment& g) const {
    if (g.arc) return piece(g);
    double dx = g.x2 - g.x1, dy = g.y2 - g.y1;
    double len = std::sqrt(dx * dx + dy * dy);
    if (len == 0) return "";
    double nx = -dy / len * 3, ny = dx / len * 3;
    std::string s = "M" + fx(g.x1) + " " + fx(g.y1);
    const int n = 4;
    for (int i = 0; i < n; ++i) {
      double t0 = (i + 0.5) / n, t1 = (i + 1.0) / n;
      double sgn = i % 2 ? -1 : 1;
      s += " Q" + fx(g.x1 + dx * t0 + sgn * nx) + " " + fx(g.y1 + dy * t0 + sgn * ny) + " " + fx(g.x1 + dx * t1) + " " +
           fx(g.y1 + dy * t1);
    }
    return s + " ";
  }

  // Additive strands get an arrowhead, the others a co-orientation tick.
  std::string tick(const Segment& g) const {
    double cx, cy, dx, dy;
    if (g.arc) {
      cx = (g.x1 + g.x2) / 2;
      cy = g.y1 + 0.75 * (g.y2 - g.y1);
      dx = g.x2 - g.x1;
      dy = 0;
    } else {
      cx = (g.x1 + g.x2) / 2;
      cy = (g.y1 + g.y2) / 2;
      dx = g.x2 - g.x1;
      dy = g.y2 - g.y1;
    }
    double len = std::sqrt(dx * dx + dy * dy);
    if (len == 0) return "";
    dx /= len;
    dy /= len;
    if (g.style == 0) {
      double ux = dx * g.sign, uy = dy * g.sign;
      return "M" + fx(cx - 4 * ux - 3 * uy) + " " + fx(cy - 4 * uy + 3 * ux) + " L" + fx(cx) + " " + fx(cy) + " L" +
             fx(cx - 4 * ux + 3 * uy) + " " + fx(cy - 4 * uy - 3 * ux) + " ";
    }
    // left normal of the upward direction
    double nx = dy * g.sign, ny = -dx * g.sign;
    return "M" + fx(cx) + " " + fx(cy) + " L" + fx(cx + 6 * nx) + " " + fx(cy + 6 * ny) + " ";
  }
};

// Generic band layout: strands left of pos pass straight, strands right of the block shift by out - in.
inline Band layout_band(const Canvas& cv, std::size_t k, std::size_t pos, std::size_t in, std::size_t out,
                        const std::vector<std::pair<int, int>>& below, const std::vector<std::pair<int, int>>& above,
                        bool crossing, bool cup, bool cap, bool dot) {
  Band b;
  double yb = cv.bottom(k), yt = cv.top(k), ym = cv.mid(k);
  for (std::size_t i = 0; i < below.size(); ++i) {
    if (i >= pos && i < pos + in) continue;
    std::size_t j = i < pos ? i : i - in + out;
    b.segments.push_back({cv.x(static_cast<double>(i)), yb, cv.x(static_cast<double>(j)), yt, below[i].first,
                          below[i].second, false});
  }
  if (dot) {
    b.marker = true;
    b.mx = cv.x(static_cast<double>(pos) - 0.5);
    b.my = ym;
    return b;
  }
  if (cup) {
    b.segments.push_back({cv.x(static_cast<double>(pos)), yt, cv.x(static_cast<double>(pos + 1)), ym, above[pos].first,
                          above[pos].second, true});
    b.mx = cv.x(static_cast<double>(pos) + 0.5);
    b.my = ym;
    return b;
  }
  if (cap) {
    b.segments.push_back({cv.x(static_cast<double>(pos)), yb, cv.x(static_cast<double>(pos + 1)), ym, below[pos].first,
                          below[pos].second, true});
    b.mx = cv.x(static_cast<double>(pos) + 0.5);
    b.my = ym;
    return b;
  }
  if (crossing) {
    for (std::size_t s = 0; s < 2; ++s)
      b.segments.push_back({cv.x(static_cast<double>(pos + s)), yb, cv.x(static_cast<double>(pos + 1 - s)), yt,
                            below[pos + s].first, below[pos + s].second, false});
    b.mx = cv.x(static_cast<double>(pos) + 0.5);
    b.my = ym;
    return b;
  }
  double cx = 0;
  for (std::size_t s = 0; s < in; ++s) cx += cv.x(static_cast<double>(pos + s));
  for (std::size_t s = 0; s < out; ++s) cx += cv.x(static_cast<double>(pos + s));
  cx /= static_cast<double>(in + out);
  for (std::size_t s = 0; s < in; ++s)
    b.segments.push_back({cv.x(static_cast<double>(pos + s)), yb, cx, ym, below[pos + s].first, below[pos + s].second, false});
  for (std::size_t s = 0; s < out; ++s)
    b.segments.push_back({cx, ym, cv.x(static_cast<double>(pos + s)), yt, above[pos + s].first, above[pos + s].second, false});
  b.marker = true;
  b.mx = cx;
  b.my = ym;
  return b;
}

inline std::vector<std::pair<int, int>> strand_styles(const DiagObject& z) {
  std::vector<std::pair<int, int>> v;
  for (const auto& p : z.points) v.push_back({is_y(p.kind) ? 1 : 0, kind_sign(p.kind)});
  return v;
}

inline std::size_t widest(const std::vector<std::size_t>& sizes) {
  std::size_t w = 1;
  for (std::size_t s : sizes) w = std::max(w, s);
  return w;
}

}  // namespace detail

// Layers are stacked bottom to top, source at the bottom.
inline std::string to_svg(const Diagram& d, const RenderOptions& opts = {}) {
  auto objs = trace(d);
  std::vector<std::size_t> sizes;
  for (const auto& z : objs) sizes.push_back(z.size());
  detail::Canvas cv(opts, detail::widest(sizes), d.layers.size());
  for (std::size_t k = 0; k < d.layers.size(); ++k) {
    const Layer& L = d.layers[k];
    auto [in, out] = layer_arity(L.kind);
    bool crossing = L.kind == GenKind::AddCross || L.kind == GenKind::XYCross || L.kind == GenKind::YXCross;
    bool cup = L.kind == GenKind::CupX || L.kind == GenKind::CupY;
    bool cap = L.kind == GenKind::CapX || L.kind == GenKind::CapY;
    detail::Band b = detail::layout_band(cv, k, L.pos, in, out, detail::strand_styles(objs[k]),
                                         detail::strand_styles(objs[k + 1]), crossing, cup, cap, L.kind == GenKind::Dot);
    b.label = gen_name(L.kind) + " @" + std::to_string(L.pos);
    if (L.kind == GenKind::Dot) b.label += " " + value_str(L.payload);
    cv.add_band(b);
  }
  return cv.finish("source: " + d.source.str(), "target: " + objs.back().str());
}

inline std::string to_svg(const GModule& U, const GDiagram& d, const RenderOptions& opts = {}) {
  auto objs = g_trace(U, d);
  const Group& G = U.group();
  std::vector<std::size_t> sizes;
  for (const auto& z : objs) sizes.push_back(z.size());
  detail::Canvas cv(opts, detail::widest(sizes), d.layers.size());
  auto styles = [](const std::vector<GStrand>& z) {
    std::vector<std::pair<int, int>> v;
    for (const auto& s : z) v.push_back({2, s.coor});
    return v;
  };
  auto strands = [&G](const std::vector<GStrand>& z) {
    if (z.empty()) return std::string("unit");
    std::string s;
    for (const auto& x : z) s += (s.empty() ? "" : " ") + G.name(x.g) + (x.coor > 0 ? "+" : "-");
    return s;
  };
  for (std::size_t k = 0; k < d.layers.size(); ++k) {
    const GLayer& L = d.layers[k];
    std::size_t in = 0, out = 0;
    switch (L.kind) {
      case GKind::Merge:
      case GKind::Merge2: in = 2; out = 1; break;
      case GKind::Split:
      case GKind::Split2: in = 1; out = 2; break;
      case GKind::Flip: in = 1; out = 1; break;
      case GKind::Cup: out = 2; break;
      case GKind::Cap: in = 2; break;
      case GKind::Dot: break;
    }
    detail::Band b = detail::layout_band(cv, k, L.pos, in, out, styles(objs[k]), styles(objs[k + 1]), false,
                                         L.kind == GKind::Cup, L.kind == GKind::Cap, L.kind == GKind::Dot);
    b.label = gkind_name(L.kind) + " @" + std::to_string(L.pos);
    if (L.kind == GKind::Dot) b.label += " " + U.str(L.dot);
    cv.add_band(b);
  }
  return cv.finish("source: " + strands(d.source), "target: " + strands(objs.back()));
}

// Elements emitted for a diagram with the given number of layers.
inline std::size_t svg_element_count(std::size_t layers) { return 3 + 5 * layers; }

}  // namespace entronet
