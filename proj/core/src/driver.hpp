#pragma once

#include <functional>
#include <optional>

#include "revfilt/filter.hpp"
#include "revfilt/stopping.hpp"

namespace revfilt::detail {

/// Produces x_{k+1} from x_k and g(x_k); may throw Error(Diverged).
using UpdateFn = std::function<Image(const Image& x, const Image& gx)>;

/// Shared iteration loop for the plain methods and the AGD schemes: x0 = b,
/// one log sample per iterate, divergence recorded, result chosen per policy.
/// `make_update` is called once per pass so stateful schemes start fresh.
RunResult drive(const Image& b, const Filter& g, const std::optional<Image>& truth,
                const StoppingPolicy& stop, int max_iterations,
                const std::function<UpdateFn()>& make_update, const std::string& scheme = {});

}  // namespace revfilt::detail
