#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "weylbessel/expectations.hpp"
#include "weylbessel/rng.hpp"

namespace wb = weylbessel;

namespace {

std::vector<double> random_interior(std::mt19937_64& rng, std::size_t n, wb::RootSystem system) {
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  wb::project_in_place(x, system);
  if (system == wb::RootSystem::B) {
    for (auto& v : x) v += 0.05;
  }
  return x;
}

// Independent route to corner-start moments: E e_k(X_t) = beta^{k/2} e_k(sqrt(2t) z) (type A),
// E e_k(X_t^2) = beta^k e_k(2t z^{(nu_eff - 1)}) (type B), via zeros and elem_sym only.
double moment_from_zeros_A(int n, double beta, double t, int k) {
  auto z = wb::hermite_zeros(n).zeros;
  for (auto& v : z) v *= std::sqrt(2.0 * t * beta);
  return wb::elem_sym(k, z);
}

double moment_from_zeros_B(int n, double beta, double nu, double t, int k) {
  auto z = wb::laguerre_zeros(n, nu + 0.5 / beta - 1.0).zeros;
  for (auto& v : z) v *= 2.0 * t * beta;
  return wb::elem_sym(k, z);
}

}  // namespace

TEST(Pochhammer, Examples) {
  EXPECT_EQ(wb::pochhammer(3.0, 0), 1.0);
  EXPECT_EQ(wb::pochhammer(3.0, 2), 12.0);
  EXPECT_DOUBLE_EQ(wb::pochhammer(0.5, 3), 1.875);
  EXPECT_DOUBLE_EQ(wb::binomial_real(5.0, 2), 10.0);
  EXPECT_DOUBLE_EQ(wb::binomial_real(2.5, 2), 2.5 * 1.5 / 2.0);
}

TEST(CompensatorA, Examples) {
  const std::vector<double> x{1.3, -0.4};
  EXPECT_DOUBLE_EQ(wb::compensator_A(2, 2, 0.7, x), wb::elem_sym(2, x) + 0.7);
  const std::vector<double> y{2.0, 0.5, -1.0, -3.0};
  EXPECT_DOUBLE_EQ(wb::compensator_A(4, 1, 5.0, y), wb::elem_sym(1, y));
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(wb::compensator_A(4, k, 0.0, y), wb::elem_sym(k, y));
  // N=4, k=4: e_4 + (2!/(2*1*0!)) t e_2 + (4!/(4*2*0!)) t^2 = e_4 + t e_2 + 3 t^2
  EXPECT_NEAR(wb::compensator_A(4, 4, 0.5, y), wb::elem_sym(4, y) + 0.5 * wb::elem_sym(2, y) + 0.75, 1e-14);
  EXPECT_THROW(wb::compensator_A(2, 3, 0.1, x), wb::ArgumentError);
  EXPECT_THROW(wb::compensator_A(2, 0, 0.1, x), wb::ArgumentError);
}

TEST(CompensatorB, Examples) {
  const std::vector<double> a{1.7};
  EXPECT_DOUBLE_EQ(wb::compensator_B(1, 1, 0.3, a, 1.25), 1.7 * 1.7 - 2 * 0.3 * 1.25);
  const std::vector<double> x{1.5, 0.5};
  EXPECT_DOUBLE_EQ(wb::compensator_B(2, 1, 0.4, x, 0.8), 2.25 + 0.25 - 4 * 0.4 * 1.8);
  for (int k = 1; k <= 2; ++k) EXPECT_EQ(wb::compensator_B(2, k, 0.0, x, 0.8), wb::elem_sym(k, wb::squared(x)));
}

TEST(ExpectedCharpolyA, Examples) {
  for (double beta : {0.5, 1.0, 2.0}) EXPECT_NEAR(wb::expected_charpoly_A(1, beta, 0.7, 1.3), 1.3, 1e-14);
  EXPECT_NEAR(wb::expected_charpoly_A(2, 1.0, 1.0, 0.0), -1.0, 1e-14);
  const double y = 1e4;
  EXPECT_NEAR(wb::expected_charpoly_A(5, 1.0, 1.0, y) / std::pow(y, 5), 1.0, 1e-6);
  EXPECT_THROW(wb::expected_charpoly_A(2, 1.0, 0.0, 1.0), wb::ArgumentError);
}

TEST(ExpectedElemSymA, Examples) {
  EXPECT_EQ(wb::expected_elem_sym_A(3, 1.0, 1.0, 1), 0.0);
  EXPECT_EQ(wb::expected_elem_sym_A(5, 2.0, 1.0, 3), 0.0);
  EXPECT_EQ(wb::expected_elem_sym_A(4, 2.0, 1.0, 0), 1.0);
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 3.0}) EXPECT_NEAR(wb::expected_elem_sym_A(2, beta, t, 2), -beta * t, 1e-14);
  }
}

TEST(ExpectedElemSymA, SecondMomentMatchesIto) {
  // Ito on sum X_i^2: E sum X^2 = (N + beta N (N-1)) t and E (sum X)^2 = N t, so E e_2 = -beta N (N-1) t / 2
  for (int n = 2; n <= 8; ++n) {
    for (double beta : {0.5, 1.0, 2.0}) {
      EXPECT_NEAR(wb::expected_elem_sym_A(n, beta, 1.3, 2), -beta * n * (n - 1) * 1.3 / 2.0, 1e-12 * n * n);
    }
  }
}

TEST(ExpectedElemSymA, MatchesZerosRoute) {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double a = wb::expected_elem_sym_A(n, 1.5, 0.8, k);
      const double b = moment_from_zeros_A(n, 1.5, 0.8, k);
      EXPECT_NEAR(a, b, 1e-10 * (1.0 + std::abs(a))) << n << " " << k;
    }
  }
}

TEST(ExpectedCharpolyA, CoefficientsMatchMoments) {
  for (int n = 1; n <= 10; ++n) {
    for (double beta : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const auto c = wb::expected_charpoly_A_coeffs(n, beta, t);
        for (int j = 0; j <= n; ++j) {
          const double sign = (j % 2 == 0) ? 1.0 : -1.0;
          const double want = sign * wb::expected_elem_sym_A(n, beta, t, j);
          const double got = c.coeffs[n - j];
          EXPECT_LE(std::abs(got - want), 1e-12 * std::max(std::abs(want), 1e-300)) << n << " " << j;
        }
        for (double y : {-1.0, 0.3, 2.0}) {
          EXPECT_NEAR(c(y), wb::expected_charpoly_A(n, beta, t, y), 1e-10 * (1 + std::abs(c(y))));
        }
      }
    }
  }
}

TEST(ExpectedCharpolyARay, ReducesToCornerAtZero) {
  for (double y : {-1.0, 0.0, 2.0}) {
    EXPECT_NEAR(wb::expected_charpoly_A_ray(3, 1.5, 0.7, 0.0, y), wb::expected_charpoly_A(3, 1.5, 0.7, y), 1e-12);
  }
  // at t = 0 the process sits at sqrt(beta) c z
  auto z = wb::hermite_zeros(3).zeros;
  double prod = 1.0;
  for (double v : z) prod *= 0.4 - std::sqrt(2.0) * 1.2 * v;
  EXPECT_NEAR(wb::expected_charpoly_A_ray(3, 2.0, 0.0, 1.2, 0.4), prod, 1e-12);
}

TEST(ExpectedCharpolyB, Examples) {
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double nu : {0.0, 1.0}) {
      EXPECT_NEAR(wb::expected_charpoly_B(1, beta, nu, 0.7, 1.9), 1.9 - 0.7 * (2 * beta * nu + 1), 1e-13);
    }
  }
  EXPECT_NEAR(wb::expected_charpoly_B(1, 0.5, 1.0, 1.0, 0.0), -2.0, 1e-14);
  const double y = 1e8;
  EXPECT_NEAR(wb::expected_charpoly_B(4, 1.0, 0.5, 1.0, y) / std::pow(y, 4), 1.0, 1e-6);
}

TEST(ExpectedElemSymB, ExamplesAndItoFirstMoment) {
  EXPECT_EQ(wb::expected_elem_sym_B(3, 1.0, 1.0, 1.0, 0), 1.0);
  for (int n = 1; n <= 5; ++n) {
    for (double beta : {0.5, 1.0, 2.0}) {
      for (double nu : {0.0, 0.5, 2.0}) {
        const double ito = 2.0 * 1.1 * beta * n * (n - 1 + nu + 0.5 / beta);
        EXPECT_NEAR(wb::expected_elem_sym_B(n, beta, nu, 1.1, 1), ito, 1e-12 * ito);
      }
    }
  }
}

TEST(ExpectedElemSymB, MatchesZerosRouteAndCharpolyCoefficients) {
  for (int n = 1; n <= 10; ++n) {
    for (double beta : {0.5, 1.0, 2.0}) {
      for (double nu : {0.0, 1.0, 2.0}) {
        for (double t : {0.5, 1.0, 2.0}) {
          const auto c = wb::expected_charpoly_B_coeffs(n, beta, nu, t);
          for (int j = 0; j <= n; ++j) {
            const double want = wb::expected_elem_sym_B(n, beta, nu, t, j);
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            EXPECT_LE(std::abs(c.coeffs[n - j] - sign * want), 1e-12 * std::abs(want)) << n << " " << j;
            EXPECT_NEAR(moment_from_zeros_B(n, beta, nu, t, j), want, 1e-9 * std::abs(want));
          }
        }
      }
    }
  }
}

TEST(ExpectedElemSymB, NormalizedMomentsDependOnNuEffOnly) {
  // (nu, beta) = (1, 1) and (0.5, 0.5) share nu_eff = 1.5
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double a = wb::expected_elem_sym_B(n, 1.0, 1.0, 0.9, k) / std::pow(1.0, k);
      const double b = wb::expected_elem_sym_B(n, 0.5, 0.5, 0.9, k) / std::pow(0.5, k);
      EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
  }
}

TEST(ExpectedElemSymB, BetaZeroLimit) {
  EXPECT_EQ(wb::expected_elem_sym_B_beta0(4, 1.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(wb::expected_elem_sym_B_beta0(2, 1.0, 1), 2.0);
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double lim = wb::expected_elem_sym_B_beta0(n, 0.7, k);
      EXPECT_NEAR(wb::expected_elem_sym_B(n, 1e-9, 1.0, 0.7, k), lim, 1e-6 * (1 + lim));
    }
  }
}

TEST(ExpectedElemSymB, BetaZeroAgainstReflectedBrownianMotion) {
  // |B_t| coordinates are independent; average e_k of their squares over many draws
  const int n = 3, samples = 200000;
  const double t = 0.8;
  wb::NormalStream draw(77, 0);
  std::vector<double> sum(n + 1, 0.0), sum2(n + 1, 0.0);
  std::vector<double> x(n);
  for (int s = 0; s < samples; ++s) {
    for (auto& v : x) v = std::sqrt(t) * draw();
    const auto e = wb::elem_sym_all(wb::squared(x));
    for (int k = 0; k <= n; ++k) {
      sum[k] += e[k];
      sum2[k] += e[k] * e[k];
    }
  }
  for (int k = 1; k <= n; ++k) {
    const double mean = sum[k] / samples;
    const double se = std::sqrt((sum2[k] / samples - mean * mean) / samples);
    EXPECT_LE(std::abs(mean - wb::expected_elem_sym_B_beta0(n, t, k)), 4 * se) << k;
  }
}

TEST(DunklIdentity, IsMonomial) {
  EXPECT_EQ(wb::expected_charpoly_dunkl_B(3, 2.0), 8.0);
}

TEST(SpaceTimeHarmonicity, CompensatorsAreAnnihilated) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ut(0.0, 2.0);
  for (double beta : {0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 4; ++n) {
      for (int k = 1; k <= n; ++k) {
        for (int rep = 0; rep < 10; ++rep) {
          const auto xa = random_interior(rng, n, wb::RootSystem::A);
          const auto spec_a = wb::ModelSpec::type_a(beta);
          const auto fa = [n, k](std::span<const double> x, double t) { return wb::compensator_A(n, k, t, x); };
          const auto ta = wb::generator_terms(fa, xa, ut(rng), spec_a);
          EXPECT_LE(std::abs(ta.value()), 1e-5 * ta.scale);

          const auto spec_b = wb::ModelSpec::type_b(beta, 0.5 * rep);
          const auto xb = random_interior(rng, n, wb::RootSystem::B);
          const auto fb = [n, k, spec_b](std::span<const double> x, double t) {
            return wb::compensator_B(n, k, t, x, spec_b.nu_eff());
          };
          const auto tb = wb::generator_terms(fb, xb, ut(rng), spec_b);
          EXPECT_LE(std::abs(tb.value()), 1e-5 * tb.scale) << beta << " " << n << " " << k;
        }
      }
    }
  }
}

TEST(SpaceTimeHarmonicity, WrongEffectiveParameterIsDetected) {
  // using nu instead of nu_eff must leave a visible residual
  const auto spec = wb::ModelSpec::type_b(0.5, 1.0);
  const std::vector<double> x{1.7, 0.9, 0.4};
  const auto f = [](std::span<const double> y, double t) { return wb::compensator_B(3, 2, t, y, 1.0); };
  const auto terms = wb::generator_terms(f, x, 0.5, spec);
  EXPECT_GT(std::abs(terms.value()), 1e-2 * terms.scale);
}
