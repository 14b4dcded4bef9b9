#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace momentkit {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : e_(n, 0) {}
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex zero(std::size_t n) { return MultiIndex(n); }
  static MultiIndex unit(std::size_t n, std::size_t j);
  static MultiIndex constant(std::size_t n, int value);

  std::size_t size() const noexcept { return e_.size(); }
  int operator[](std::size_t j) const { return e_[j]; }
  int& operator[](std::size_t j) { return e_[j]; }
  const std::vector<int>& entries() const noexcept { return e_; }

  int total() const noexcept;
  // beta <= alpha coordinatewise.
  bool dominated_by(const MultiIndex& alpha) const;
  bool is_zero() const noexcept { return total() == 0; }

  MultiIndex operator+(const MultiIndex& o) const;
  // Requires o <= *this coordinatewise.
  MultiIndex operator-(const MultiIndex& o) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.e_ <=> b.e_;
  }

  std::string to_string() const;

 private:
  std::vector<int> e_;
};

// All multi-indices of dimension n with |alpha| <= D, in graded order
// (by total degree, then lexicographically descending in the first entry).
class IndexSet {
 public:
  IndexSet(std::size_t n, int max_degree);

  std::size_t dimension() const noexcept { return n_; }
  int max_degree() const noexcept { return d_; }
  std::size_t size() const noexcept { return list_.size(); }
  const MultiIndex& at(std::size_t pos) const { return list_[pos]; }
  const std::vector<MultiIndex>& indices() const noexcept { return list_; }

  // Positions [shell_begin(k), shell_begin(k+1)) hold the indices of total degree k.
  std::size_t shell_begin(int k) const { return shell_[static_cast<std::size_t>(k)]; }

  bool contains(const MultiIndex& a) const;
  // Throws DegreeExceeded / DimensionMismatch when a is not in the set.
  std::size_t position(const MultiIndex& a) const;

 private:
  std::size_t n_;
  int d_;
  std::vector<MultiIndex> list_;
  std::vector<std::size_t> shell_;
  std::map<MultiIndex, std::size_t> lookup_;
};

// Shared cache so sequences of the same shape reuse one index set.
std::shared_ptr<const IndexSet> index_set(std::size_t n, int max_degree);

// Number of multi-indices of dimension n and total degree <= D.
std::size_t count_indices(std::size_t n, int max_degree);

}  // namespace momentkit
