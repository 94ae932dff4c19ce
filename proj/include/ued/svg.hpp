#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ued/arc.hpp"

namespace ued {

/// Line chart of an arc: normalized time on x, emotion state on y, both in
/// [0, 1]. Long arcs are thinned to at most `max_points` vertices.
std::string render_arc_svg(const EmotionArc& arc, std::string_view title, std::size_t max_points = 1000);

}  // namespace ued
