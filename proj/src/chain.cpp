#include "kavg/chain.hpp"

#include <sstream>

namespace kavg {

void validate(const ChainParams& params) {
  detail::check_subset_domain(params.n, params.k);
}

namespace detail {

void check_subset_domain(std::size_t n, std::size_t k) {
  if (k < 2 || k > n) {
    throw DomainError("group size k must satisfy 2 <= k <= n (got n = " + std::to_string(n) +
                      ", k = " + std::to_string(k) + ")");
  }
}

}  // namespace detail

SubsetChoice SubsetChoice::from_zero_based(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw DomainError("subset contains a repeated index");
  }
  SubsetChoice out;
  out.indices_ = std::move(indices);
  return out;
}

SubsetChoice SubsetChoice::from_one_based(std::span<const std::size_t> indices) {
  std::vector<std::size_t> zero;
  zero.reserve(indices.size());
  for (auto i : indices) {
    if (i == 0) throw DomainError("subset indices are 1-based; got 0");
    zero.push_back(i - 1);
  }
  return from_zero_based(std::move(zero));
}

std::vector<std::size_t> SubsetChoice::one_based() const {
  std::vector<std::size_t> out(indices_.begin(), indices_.end());
  for (auto& i : out) ++i;
  return out;
}

std::string SubsetChoice::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) os << ' ';
    os << indices_[i] + 1;
  }
  return os.str();
}

Vector<double> basis_vector(std::size_t n) {
  Vector<double> x = Vector<double>::Zero(static_cast<Eigen::Index>(n));
  if (n > 0) x[0] = 1.0;
  return x;
}

Vector<double> centered_basis_vector(std::size_t n) {
  const double nd = static_cast<double>(n);
  Vector<double> x = Vector<double>::Constant(static_cast<Eigen::Index>(n), -1.0 / nd);
  if (n > 0) x[0] = 1.0 - 1.0 / nd;
  return x;
}

}  // namespace kavg
