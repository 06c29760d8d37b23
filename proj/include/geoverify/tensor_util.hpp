#pragma once

#include <array>
#include <unsupported/Eigen/CXX11/Tensor>

namespace geoverify {

/// Calls f(idx) for every multi-index of a rank-N cube with side d (last index fastest).
template <int N, class F>
void for_each_index(Eigen::Index d, F&& f) {
  std::array<Eigen::Index, N> idx{};
  if constexpr (N == 0) {
    f(idx);
    return;
  } else {
    if (d == 0) return;
    while (true) {
      f(idx);
      int pos = N - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == d) idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) return;
    }
  }
}

template <int N>
Eigen::Tensor<double, N> zero_tensor(Eigen::Index d) {
  std::array<Eigen::Index, N> dims;
  dims.fill(d);
  Eigen::Tensor<double, N> t(dims);
  t.setZero();
  return t;
}

template <int N>
double max_abs(const Eigen::Tensor<double, N>& t) {
  if (t.size() == 0) return 0.0;
  const Eigen::Tensor<double, 0> m = t.abs().maximum();
  return m();
}

template <int N>
double max_abs_diff(const Eigen::Tensor<double, N>& a, const Eigen::Tensor<double, N>& b) {
  const Eigen::Tensor<double, N> diff = a - b;
  return max_abs<N>(diff);
}

/// Sign of the permutation that sorts `idx` (0 if an index repeats).
template <std::size_t N>
int permutation_sign(std::array<int, N> idx) {
  int sign = 1;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

}  // namespace geoverify
