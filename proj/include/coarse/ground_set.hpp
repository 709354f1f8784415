#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

using Index = int;
using IndexPair = std::pair<Index, Index>;

/// Finite index set {0, ..., size-1}, optionally carrying display labels.
/// Two ground sets are compatible when their sizes agree; labels never
/// participate in any algebraic operation.
class GroundSet {
 public:
  explicit GroundSet(Index size) : size_(size) {
    if (size < 0) throw std::invalid_argument("GroundSet: negative size");
  }

  GroundSet(Index size, std::vector<std::string> labels) : GroundSet(size) {
    if (static_cast<Index>(labels.size()) != size)
      throw std::invalid_argument("GroundSet: label count differs from size");
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j)
        if (labels[i] == labels[j])
          throw std::invalid_argument("GroundSet: duplicate label " + labels[i]);
    labels_ = std::move(labels);
  }

  Index size() const { return size_; }
  const std::optional<std::vector<std::string>>& labels() const { return labels_; }

  bool compatible_with(const GroundSet& other) const { return size_ == other.size_; }

 private:
  Index size_;
  std::optional<std::vector<std::string>> labels_;
};

}  // namespace coarse
