#include "homchar/multi_index.hpp"

#include <numeric>

#include "homchar/errors.hpp"

namespace homchar {

std::uint64_t MultiIndex::degree() const {
  return std::accumulate(e_.begin(), e_.end(), std::uint64_t{0});
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.size() != size()) throw UniverseMismatch("multi-index length mismatch");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
  return r;
}

MultiIndex MultiIndex::scaled(std::uint32_t k) const {
  MultiIndex r(*this);
  for (auto& v : r.e_) v *= k;
  return r;
}

}  // namespace homchar
