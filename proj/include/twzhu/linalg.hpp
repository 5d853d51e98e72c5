#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace twzhu {

// Sparse vector over a field F, keyed by an ordered key type.
template <class Key, class F>
using SparseVec = std::map<Key, F>;

template <class Key, class F>
void axpy(SparseVec<Key, F>& v, const F& c, const SparseVec<Key, F>& w) {
  for (const auto& [k, x] : w) {
    auto [it, fresh] = v.try_emplace(k, F(0));
    it->second -= c * x;
    if (it->second.is_zero()) v.erase(it);
  }
}

// Incremental row echelon form.  Every stored row has pivot equal to its
// smallest key, normalized to 1.  Each row can carry a tag vector that records
// the combination of inserted inputs it came from (used for kernels).
template <class Key, class F>
class Echelon {
 public:
  using Vec = SparseVec<Key, F>;
  using Tag = SparseVec<std::size_t, F>;

  // Reduces v (and its tag) against the stored rows.
  void reduce(Vec& v, Tag* tag = nullptr) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto pr = rows_.find(it->first);
      if (pr == rows_.end()) {
        ++it;
        continue;
      }
      Key k = it->first;
      F c = it->second;
      axpy(v, c, pr->second.first);
      if (tag) axpy(*tag, c, pr->second.second);
      it = v.upper_bound(k);
    }
  }

  bool contains(Vec v) const {
    reduce(v);
    return v.empty();
  }

  // Inserts v; returns true when it was independent of the stored rows.
  bool insert(Vec v, Tag tag = {}) {
    reduce(v, &tag);
    if (v.empty()) return false;
    F inv = F(1) / v.begin()->second;
    for (auto& [k, x] : v) x *= inv;
    for (auto& [k, x] : tag) x *= inv;
    Key p = v.begin()->first;
    rows_.emplace(p, std::make_pair(std::move(v), std::move(tag)));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::map<Key, std::pair<Vec, Tag>>& rows() const { return rows_; }

 private:
  std::map<Key, std::pair<Vec, Tag>> rows_;
};

// Kernel and rank of the linear map sending input i to images[i].
template <class Key, class F>
struct KernelResult {
  std::size_t rank = 0;
  std::vector<SparseVec<std::size_t, F>> kernel;  // combinations of inputs
};

template <class Key, class F>
KernelResult<Key, F> kernel_of(const std::vector<SparseVec<Key, F>>& images) {
  Echelon<Key, F> ech;
  KernelResult<Key, F> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    typename Echelon<Key, F>::Tag tag;
    tag[i] = F(1);
    SparseVec<Key, F> v = images[i];
    ech.reduce(v, &tag);
    if (v.empty()) {
      out.kernel.push_back(std::move(tag));
    } else {
      ech.insert(std::move(v), std::move(tag));
    }
  }
  out.rank = ech.rank();
  return out;
}

template <class Key, class F>
std::size_t rank_of(const std::vector<SparseVec<Key, F>>& vecs) {
  Echelon<Key, F> ech;
  for (const auto& v : vecs) ech.insert(v);
  return ech.rank();
}

}  // namespace twzhu
