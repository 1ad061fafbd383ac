#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hiact/core/matrix.hpp"

namespace hiact {

/// Per-frame, per-region descriptors of one video: regions[r] is T x D.
struct VideoFeatures {
    std::string video_id;
    std::vector<Matrix> regions;
    std::vector<std::uint8_t> degenerate;  // T x R flags from GEO, may be empty

    std::size_t region_count() const noexcept { return regions.size(); }
    std::size_t length() const noexcept { return regions.empty() ? 0 : regions.front().rows(); }
    std::size_t dim() const noexcept { return regions.empty() ? 0 : regions.front().cols(); }
};

}  // namespace hiact
