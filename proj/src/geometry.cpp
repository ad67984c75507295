#include "geolabel/geometry.hpp"

namespace geolabel {

std::optional<std::vector<Point2T<std::int64_t>>> scaled_points(std::span<const Point2> pts,
                                                                std::int64_t extra_factor) {
  std::vector<Rational> flat;
  flat.reserve(2 * pts.size());
  for (const auto& p : pts) {
    flat.push_back(p.x * extra_factor);
    flat.push_back(p.y * extra_factor);
  }
  auto scaled = scale_to_integers(flat);
  if (!scaled) return std::nullopt;
  std::vector<Point2T<std::int64_t>> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    out[i] = {scaled->values[2 * i], scaled->values[2 * i + 1]};
  return out;
}

}  // namespace geolabel
