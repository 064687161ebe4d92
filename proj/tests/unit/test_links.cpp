#include "ularma/links.hpp"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

using ularma::Link;

namespace {
constexpr Link kAll[] = {Link::logit, Link::loglog, Link::cloglog};
}

TEST(Links, ClosedForms) {
  EXPECT_NEAR(ularma::link_apply(Link::logit, 0.75), std::log(3.0), 1e-15);
  EXPECT_NEAR(ularma::link_apply(Link::loglog, 0.5), -std::log(std::log(2.0)), 1e-15);
  EXPECT_NEAR(ularma::link_apply(Link::cloglog, 0.5), std::log(std::log(2.0)), 1e-15);
  EXPECT_NEAR(ularma::link_deriv(Link::logit, 0.5), 4.0, 1e-15);
  EXPECT_NEAR(ularma::link_deriv(Link::cloglog, 1.0 - std::exp(-1.0)), std::exp(1.0), 1e-12);
}

TEST(Links, InverseRoundTrip) {
  for (Link l : kAll) {
    for (double mu = 0.01; mu < 1.0; mu += 0.0137) {
      EXPECT_NEAR(ularma::link_inverse(l, ularma::link_apply(l, mu)), mu, 1e-13)
          << ularma::to_string(l) << " mu=" << mu;
    }
  }
}

TEST(Links, DerivativeMatchesFiniteDifference) {
  for (Link l : kAll) {
    for (double mu : {0.03, 0.2, 0.5, 0.8, 0.97}) {
      const double h = 1e-6;
      const double fd = (ularma::link_apply(l, mu + h) - ularma::link_apply(l, mu - h)) / (2 * h);
      EXPECT_NEAR(ularma::link_deriv(l, mu), fd, 1e-6 * std::abs(fd));
      EXPECT_GT(ularma::link_deriv(l, mu), 0.0);
    }
  }
}

TEST(Links, InverseSaturates) {
  for (Link l : kAll) {
    EXPECT_EQ(ularma::link_inverse(l, 1e6), 1.0 - ularma::kMuEpsilon);
    EXPECT_EQ(ularma::link_inverse(l, -1e6), ularma::kMuEpsilon);
    const auto b = ularma::eta_bounds(l);
    EXPECT_NEAR(ularma::link_inverse(l, b.lower), ularma::kMuEpsilon, 1e-15);
    EXPECT_NEAR(ularma::link_inverse(l, b.upper), 1.0 - ularma::kMuEpsilon, 1e-15);
    EXPECT_TRUE(std::isnan(ularma::link_inverse(l, std::nan(""))));
  }
}

TEST(Links, ParseAndPrint) {
  for (Link l : kAll) EXPECT_EQ(ularma::parse_link(ularma::to_string(l)), l);
  EXPECT_THROW((void)ularma::parse_link("probit"), std::invalid_argument);
  EXPECT_THROW((void)ularma::link_apply(Link::logit, 1.0), std::domain_error);
}
