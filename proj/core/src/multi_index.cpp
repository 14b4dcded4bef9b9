#include "momentkit/multi_index.hpp"

#include <mutex>
#include <numeric>
#include <tuple>

#include "momentkit/error.hpp"

namespace momentkit {

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_) {
    if (v < 0) raise(ErrorCode::kInvalidArgument, "multi-index entries must be non-negative");
  }
}

MultiIndex MultiIndex::unit(std::size_t n, std::size_t j) {
  MultiIndex m(n);
  m.e_.at(j) = 1;
  return m;
}

MultiIndex MultiIndex::constant(std::size_t n, int value) {
  return MultiIndex(std::vector<int>(n, value));
}

int MultiIndex::total() const noexcept { return std::accumulate(e_.begin(), e_.end(), 0); }

bool MultiIndex::dominated_by(const MultiIndex& alpha) const {
  if (alpha.size() != size()) return false;
  for (std::size_t j = 0; j < size(); ++j) {
    if (e_[j] > alpha.e_[j]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.size() != size()) raise(ErrorCode::kDimensionMismatch, "multi-index sizes differ");
  MultiIndex r(*this);
  for (std::size_t j = 0; j < size(); ++j) r.e_[j] += o.e_[j];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  if (o.size() != size()) raise(ErrorCode::kDimensionMismatch, "multi-index sizes differ");
  MultiIndex r(*this);
  for (std::size_t j = 0; j < size(); ++j) {
    r.e_[j] -= o.e_[j];
    if (r.e_[j] < 0) raise(ErrorCode::kInvalidArgument, "multi-index difference is negative");
  }
  return r;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < e_.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(e_[j]);
  }
  return s + ")";
}

namespace {

// Appends all indices of dimension n and total degree k, first entry descending.
void append_shell(std::size_t n, int k, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == n) {
    prefix.push_back(k);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = k; v >= 0; --v) {
    prefix.push_back(v);
    append_shell(n, k - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

IndexSet::IndexSet(std::size_t n, int max_degree) : n_(n), d_(max_degree) {
  if (n == 0) raise(ErrorCode::kInvalidArgument, "dimension must be positive");
  if (max_degree < 0) raise(ErrorCode::kInvalidArgument, "max degree must be non-negative");
  list_.reserve(count_indices(n, max_degree));
  std::vector<int> prefix;
  for (int k = 0; k <= max_degree; ++k) {
    shell_.push_back(list_.size());
    append_shell(n, k, prefix, list_);
  }
  shell_.push_back(list_.size());
  if (n > 1) {
    for (std::size_t i = 0; i < list_.size(); ++i) lookup_.emplace(list_[i], i);
  }
}

bool IndexSet::contains(const MultiIndex& a) const {
  return a.size() == n_ && a.total() <= d_;
}

std::size_t IndexSet::position(const MultiIndex& a) const {
  if (a.size() != n_) raise(ErrorCode::kDimensionMismatch, "index " + a.to_string() + " has wrong dimension");
  if (a.total() > d_) {
    raise(ErrorCode::kDegreeExceeded,
          "index " + a.to_string() + " exceeds max degree " + std::to_string(d_));
  }
  if (n_ == 1) return static_cast<std::size_t>(a[0]);
  return lookup_.at(a);
}

std::size_t count_indices(std::size_t n, int max_degree) {
  if (max_degree < 0) return 0;
  // C(D + n, n)
  long double c = 1;
  for (std::size_t j = 1; j <= n; ++j) c = c * (max_degree + static_cast<long double>(j)) / j;
  return static_cast<std::size_t>(c + 0.5L);
}

std::shared_ptr<const IndexSet> index_set(std::size_t n, int max_degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, std::shared_ptr<const IndexSet>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, max_degree}];
  if (!slot) slot = std::make_shared<const IndexSet>(n, max_degree);
  return slot;
}

}  // namespace momentkit
