#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmax/time_series.hpp"

namespace qmax {

inline constexpr std::size_t kDefaultBlockSize = 1;

/// Per-block extremes of consecutive, non-overlapping blocks. A trailing
/// partial block is discarded, so maxima.size() == floor(n / block_size).
struct BlockMaximaSeries {
  std::size_t block_size = 1;
  std::vector<double> maxima;
  std::string source_label;
};

BlockMaximaSeries extract_block_maxima(std::span<const double> values, std::size_t block_size,
                                       std::string source_label = {});
BlockMaximaSeries extract_block_maxima(const TimeSeries& series, std::size_t block_size);

/// Block minima, computed as -max(-x). The result's `maxima` field holds the minima.
BlockMaximaSeries extract_block_minima(std::span<const double> values, std::size_t block_size,
                                       std::string source_label = {});
BlockMaximaSeries extract_block_minima(const TimeSeries& series, std::size_t block_size);

}  // namespace qmax
