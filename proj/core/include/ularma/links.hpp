#pragma once

#include <string>
#include <string_view>

namespace ularma {

/// Link between the conditional mean mu in (0, 1) and the linear predictor.
enum class Link { logit, loglog, cloglog };

/// Saturation margin applied by link_inverse.
inline constexpr double kMuEpsilon = 1e-7;

/// g(mu). logit: log(mu/(1-mu)); cloglog: log(-log(1-mu)); loglog: -log(-log(mu)).
/// Throws std::domain_error outside (0, 1).
[[nodiscard]] double link_apply(Link link, double mu);

/// g^{-1}(eta), saturated to [kMuEpsilon, 1 - kMuEpsilon]. NaN propagates.
[[nodiscard]] double link_inverse(Link link, double eta);

/// g'(mu); positive on (0, 1) for every supported link.
[[nodiscard]] double link_deriv(Link link, double mu);

/// Linear-predictor range [g(eps), g(1 - eps)] inside which link_inverse does
/// not saturate.
struct EtaBounds {
  double lower;
  double upper;
};
[[nodiscard]] EtaBounds eta_bounds(Link link);

/// "logit", "loglog" or "cloglog"; throws std::invalid_argument otherwise.
[[nodiscard]] Link parse_link(std::string_view name);
[[nodiscard]] std::string to_string(Link link);

}  // namespace ularma
