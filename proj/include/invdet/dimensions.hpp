#pragma once

#include <string>

#include "invdet/error.hpp"
#include "invdet/linalg.hpp"

namespace invdet {

/// Problem geometry: N channels, K secondary snapshots, signal subspace of
/// rank r and jammer subspace of rank t.
struct Dimensions {
  int channels = 0;     // N
  int snapshots = 0;    // K
  int signal_rank = 0;  // r
  int jammer_rank = 0;  // t

  int subspace_rank() const noexcept { return signal_rank + jammer_rank; }  // m
  int residual_dim() const noexcept { return channels - subspace_rank(); }   // N - m
  bool full_subspace() const noexcept { return residual_dim() == 0; }

  /// K - (N - t) + 1: complex dof of the denominator chi-square that drives
  /// the conditional law of p1.
  int training_dof() const noexcept { return snapshots - (channels - jammer_rank) + 1; }

  /// (K - (N - t) + 1) / r, the upper end of the LMPID range.
  double lmpid_scale() const noexcept {
    return static_cast<double>(training_dof()) / signal_rank;
  }

  /// Throws InvalidArgument unless N >= 2, r >= 1, t >= 1, m <= N, K >= N.
  void validate() const;

  std::string describe() const;
};

/// Block sizes (t, r, N - m) used to partition z and S.
struct Partition {
  Index jammer = 0;
  Index signal = 0;
  Index residual = 0;

  Index total() const noexcept { return jammer + signal + residual; }
  Index offset(int block) const noexcept;  // block in {1,2,3}
  Index size(int block) const noexcept;

  static Partition from(const Dimensions& d) {
    return {d.jammer_rank, d.signal_rank, d.residual_dim()};
  }
  bool operator==(const Partition&) const = default;
};

}  // namespace invdet
