#include "ptkho/params.hpp"

#include <cmath>
#include <string>

#include "ptkho/error.hpp"

namespace ptkho {

void FloquetParams::validate() const {
  auto check = [](double v, const char* name, bool allow_zero) {
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      throw ValidationError(std::string(name) + (allow_zero ? " must be finite and >= 0"
                                                            : " must be finite and > 0"));
    }
  };
  check(kick_strength, "K", true);
  check(lambda, "lambda", true);
  check(eta, "eta", true);
  check(hbar_eff, "hbar_eff", false);
  if (substeps < 1) throw ValidationError("substeps must be >= 1");
}

void RunConfig::validate() const {
  params.validate();
  if (total_kicks < 0) throw ValidationError("total_kicks must be >= 0");
  for (int t : snapshot_times) {
    if (t < 0 || t > total_kicks) {
      throw ValidationError("snapshot time " + std::to_string(t) + " outside [0, " +
                            std::to_string(total_kicks) + "]");
    }
  }
  if (!(edge_guard > 0.0 && edge_guard < 1.0)) throw ValidationError("edge_guard must lie in (0, 1)");
}

}  // namespace ptkho
