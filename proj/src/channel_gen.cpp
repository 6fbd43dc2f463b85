#include "swipt_re/random.hpp"
#include "swipt_re/scenario.hpp"

namespace swipt {

CMatrix generate_rayleigh_channel(int m, int n, double variance, std::uint64_t seed) {
  if (m < 1 || n < 1) throw Error(ErrorCode::kInvalidArgument, "channel dimensions must be >= 1");
  if (!(variance > 0.0)) throw Error(ErrorCode::kInvalidArgument, "variance must be > 0");
  GaussianSource rng(seed);
  CMatrix h(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) h(i, j) = rng.next_complex(variance);
  return h;
}

}  // namespace swipt
