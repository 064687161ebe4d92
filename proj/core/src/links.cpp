#include "ularma/links.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ularma {
namespace {

void require_open_unit(double mu, const char* what) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw std::domain_error(std::string(what) + ": mu = " + std::to_string(mu) +
                            " is outside (0, 1)");
  }
}

}  // namespace

double link_apply(Link link, double mu) {
  require_open_unit(mu, "link_apply");
  switch (link) {
    case Link::logit:
      return std::log(mu) - std::log1p(-mu);
    case Link::loglog:
      return -std::log(-std::log(mu));
    case Link::cloglog:
      return std::log(-std::log1p(-mu));
  }
  throw std::logic_error("link_apply: unknown link");
}

double link_inverse(Link link, double eta) {
  if (std::isnan(eta)) return eta;
  double mu = 0.0;
  switch (link) {
    case Link::logit:
      mu = 1.0 / (1.0 + std::exp(-eta));
      break;
    case Link::loglog:
      mu = std::exp(-std::exp(-eta));
      break;
    case Link::cloglog:
      mu = -std::expm1(-std::exp(eta));
      break;
  }
  return std::clamp(mu, kMuEpsilon, 1.0 - kMuEpsilon);
}

double link_deriv(Link link, double mu) {
  require_open_unit(mu, "link_deriv");
  switch (link) {
    case Link::logit:
      return 1.0 / (mu * (1.0 - mu));
    case Link::loglog:
      return -1.0 / (mu * std::log(mu));
    case Link::cloglog:
      return -1.0 / ((1.0 - mu) * std::log1p(-mu));
  }
  throw std::logic_error("link_deriv: unknown link");
}

EtaBounds eta_bounds(Link link) {
  return {link_apply(link, kMuEpsilon), link_apply(link, 1.0 - kMuEpsilon)};
}

Link parse_link(std::string_view name) {
  if (name == "logit") return Link::logit;
  if (name == "loglog") return Link::loglog;
  if (name == "cloglog") return Link::cloglog;
  throw std::invalid_argument("unknown link '" + std::string(name) +
                              "' (expected logit, loglog or cloglog)");
}

std::string to_string(Link link) {
  switch (link) {
    case Link::logit:
      return "logit";
    case Link::loglog:
      return "loglog";
    case Link::cloglog:
      return "cloglog";
  }
  return "unknown";
}

}  // namespace ularma
