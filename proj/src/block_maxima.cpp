#include "qmax/block_maxima.hpp"

#include <algorithm>

#include "qmax/errors.hpp"

namespace qmax {

BlockMaximaSeries extract_block_maxima(std::span<const double> values, std::size_t block_size,
                                       std::string source_label) {
  if (block_size == 0) throw DomainError("block size must be at least 1");
  if (values.size() < block_size) {
    throw InsufficientDataError("series '" + source_label + "' has " +
                                std::to_string(values.size()) + " samples, fewer than one block of " +
                                std::to_string(block_size));
  }
  BlockMaximaSeries out;
  out.block_size = block_size;
  out.source_label = std::move(source_label);
  const std::size_t blocks = values.size() / block_size;
  out.maxima.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto block = values.subspan(b * block_size, block_size);
    out.maxima.push_back(*std::max_element(block.begin(), block.end()));
  }
  return out;
}

BlockMaximaSeries extract_block_maxima(const TimeSeries& series, std::size_t block_size) {
  return extract_block_maxima(series.values, block_size, series.label);
}

BlockMaximaSeries extract_block_minima(std::span<const double> values, std::size_t block_size,
                                       std::string source_label) {
  std::vector<double> negated(values.size());
  std::transform(values.begin(), values.end(), negated.begin(), [](double v) { return -v; });
  auto out = extract_block_maxima(negated, block_size, std::move(source_label));
  for (double& v : out.maxima) v = -v;
  return out;
}

BlockMaximaSeries extract_block_minima(const TimeSeries& series, std::size_t block_size) {
  return extract_block_minima(series.values, block_size, series.label);
}

}  // namespace qmax
