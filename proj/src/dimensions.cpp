#include "invdet/dimensions.hpp"

namespace invdet {

void Dimensions::validate() const {
  if (channels < 2) throw Error(ErrorKind::InvalidArgument, "need N >= 2 (" + describe() + ")");
  if (signal_rank < 1) throw Error(ErrorKind::InvalidArgument, "need r >= 1 (" + describe() + ")");
  if (jammer_rank < 1) throw Error(ErrorKind::InvalidArgument, "need t >= 1 (" + describe() + ")");
  if (subspace_rank() > channels) {
    throw Error(ErrorKind::InvalidArgument, "need t + r <= N (" + describe() + ")");
  }
  if (snapshots < channels) {
    throw Error(ErrorKind::InvalidArgument, "need K >= N (" + describe() + ")");
  }
}

std::string Dimensions::describe() const {
  return "N=" + std::to_string(channels) + " K=" + std::to_string(snapshots) +
         " r=" + std::to_string(signal_rank) + " t=" + std::to_string(jammer_rank);
}

Index Partition::offset(int block) const noexcept {
  switch (block) {
    case 1: return 0;
    case 2: return jammer;
    default: return jammer + signal;
  }
}

Index Partition::size(int block) const noexcept {
  switch (block) {
    case 1: return jammer;
    case 2: return signal;
    default: return residual;
  }
}

}  // namespace invdet
