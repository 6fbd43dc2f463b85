#pragma once

#include <string>
#include <vector>

#include "swipt_re/regions.hpp"

namespace swipt::detail {

struct EnvelopeSample {
  double q = 0.0;  // zeta = 1
  double rate = 0.0;
  bool converged = true;
  std::string error;
};

/// H' = (I - diag(rho))^{1/2} H, G' = diag(rho)^{1/2} H.
ChannelPair split_channels(const CMatrix& h, const RVector& rho);

/// Upper envelope over split candidates of the per-candidate boundary rate,
/// sampled on q_k = k / (n - 1) * Q_top. With `refine_uniform`, uniform
/// candidates are complemented by a per-energy search over rho.
std::vector<EnvelopeSample> split_envelope(const CMatrix& h, double power,
                                           const std::vector<SplitVector>& candidates,
                                           int n_points, bool refine_uniform,
                                           const TraceOptions& opts);

}  // namespace swipt::detail
