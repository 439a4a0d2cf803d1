#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "weylbessel/model.hpp"
#include "weylbessel/symfun.hpp"

namespace wb = weylbessel;

namespace {

std::vector<double> random_interior(std::mt19937_64& rng, std::size_t n, wb::RootSystem system) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  wb::project_in_place(x, system);
  return x;
}

}  // namespace

TEST(ModelSpec, Validation) {
  EXPECT_THROW(wb::ModelSpec::type_a(0.0), wb::ArgumentError);
  EXPECT_THROW(wb::ModelSpec::type_b(1.0, -0.1), wb::ArgumentError);
  EXPECT_TRUE(wb::ModelSpec::type_a(wb::kInfiniteBeta).beta_infinite());
  EXPECT_DOUBLE_EQ(wb::ModelSpec::type_b(0.5, 1.0).nu_eff(), 2.0);
  EXPECT_DOUBLE_EQ(wb::ModelSpec::type_b(wb::kInfiniteBeta, 1.0).nu_eff(), 1.0);
  EXPECT_GE(wb::ModelSpec::type_b(3.0, 0.2).nu_eff(), 0.2);
}

TEST(Drift, TypeAExamples) {
  const auto d1 = wb::drift_A(std::vector<double>{1, -1}, 1.0);
  EXPECT_DOUBLE_EQ(d1[0], 0.5);
  EXPECT_DOUBLE_EQ(d1[1], -0.5);
  const auto d2 = wb::drift_A(std::vector<double>{2, 0, -2}, 2.0);
  EXPECT_DOUBLE_EQ(d2[0], 1.5);
  EXPECT_DOUBLE_EQ(d2[1], 0.0);
  EXPECT_DOUBLE_EQ(d2[2], -1.5);
  EXPECT_THROW(wb::drift_A(std::vector<double>{1, 1}, 1.0), wb::SingularInputError);
}

TEST(Drift, TypeBExamples) {
  EXPECT_DOUBLE_EQ(wb::drift_B(std::vector<double>{1}, 1.0, 2.0)[0], 2.0);
  const auto d = wb::drift_B(std::vector<double>{2, 1}, 1.0, 0.0);
  EXPECT_NEAR(d[0], 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(d[1], -2.0 / 3.0, 1e-15);
  const auto e = wb::drift_B(std::vector<double>{2, 1}, 0.5, 1.0);
  EXPECT_NEAR(e[0], 11.0 / 12.0, 1e-15);
  EXPECT_NEAR(e[1], 1.0 / 6.0, 1e-15);
  EXPECT_THROW(wb::drift_B(std::vector<double>{1, 0}, 1.0, 1.0), wb::SingularInputError);
}

TEST(Drift, NormalizedAndZeroSum) {
  const auto a = wb::drift_normalized(std::vector<double>{1, -1}, wb::ModelSpec::type_a(7.0));
  EXPECT_DOUBLE_EQ(a[0], 0.5);
  EXPECT_DOUBLE_EQ(a[1], -0.5);
  EXPECT_DOUBLE_EQ(wb::drift_normalized(std::vector<double>{1}, wb::ModelSpec::type_b(3.0, 2.0))[0], 2.0);
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_interior(rng, 2 + rep % 6, wb::RootSystem::A);
    const auto d = wb::drift_normalized(x, wb::ModelSpec::type_a(1.0));
    double s = 0.0, abs_s = 0.0;
    for (double v : d) {
      s += v;
      abs_s += std::abs(v);
    }
    EXPECT_LE(std::abs(s), 1e-12 * abs_s);
  }
}

TEST(Projection, ExamplesAndIdempotence) {
  EXPECT_EQ(wb::project_to_chamber({-1, 1}, wb::RootSystem::A).coords(), (std::vector<double>{1, -1}));
  EXPECT_EQ(wb::project_to_chamber({-3, 2}, wb::RootSystem::B).coords(), (std::vector<double>{3, 2}));
  EXPECT_EQ(wb::project_to_chamber({1, 1}, wb::RootSystem::A).coords(), (std::vector<double>{1, 1}));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(1 + rep % 7);
    for (auto& v : x) v = u(rng);
    for (auto sys : {wb::RootSystem::A, wb::RootSystem::B}) {
      const auto p = wb::project_to_chamber(x, sys);
      EXPECT_TRUE(wb::in_chamber(p.coords(), sys));
      EXPECT_EQ(wb::project_to_chamber(p.coords(), sys).coords(), p.coords());
      const auto before = sys == wb::RootSystem::A ? wb::elem_sym_all(x) : wb::elem_sym_all(wb::squared(x));
      const auto after = sys == wb::RootSystem::A ? wb::elem_sym_all(p.coords())
                                                  : wb::elem_sym_all(wb::squared(p.coords()));
      for (std::size_t k = 0; k < before.size(); ++k) EXPECT_NEAR(before[k], after[k], 1e-12 * (1 + std::abs(before[k])));
    }
  }
}

TEST(ChamberPoint, RejectsOutsidePoints) {
  EXPECT_THROW(wb::ChamberPoint({0, 1}, wb::RootSystem::A), wb::ArgumentError);
  EXPECT_THROW(wb::ChamberPoint({1, -1}, wb::RootSystem::B), wb::ArgumentError);
  EXPECT_NO_THROW(wb::ChamberPoint({1, -1}, wb::RootSystem::A));
}

TEST(Weight, ExamplesAndHomogeneity) {
  EXPECT_DOUBLE_EQ(wb::weight_w(std::vector<double>{1, 0}, wb::ModelSpec::type_a(1.0)), 1.0);
  EXPECT_DOUBLE_EQ(wb::weight_w(std::vector<double>{2, 1}, wb::ModelSpec::type_a(0.5)), 1.0);
  EXPECT_EQ(wb::weight_w(std::vector<double>{1, 1}, wb::ModelSpec::type_a(1.0)), 0.0);
  EXPECT_THROW(wb::weight_w(std::vector<double>{1, 0}, wb::ModelSpec::type_a(wb::kInfiniteBeta)), wb::ArgumentError);
  // B with beta = 1, nu = 1: (4-1)^2 * 2^2 * 1^2 = 36
  EXPECT_NEAR(wb::weight_w(std::vector<double>{2, 1}, wb::ModelSpec::type_b(1.0, 1.0)), 36.0, 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rep % 4;
    const auto spec = rep % 2 ? wb::ModelSpec::type_a(0.5 + rep % 3) : wb::ModelSpec::type_b(0.5 + rep % 3, 0.7);
    const auto x = random_interior(rng, n, spec.system());
    const double t = scale(rng);
    std::vector<double> tx(x);
    for (auto& v : tx) v *= t;
    const double ratio = wb::weight_w(tx, spec) / wb::weight_w(x, spec);
    const double expect = std::pow(t, 2.0 * wb::gamma_exponent(spec, static_cast<int>(n)));
    EXPECT_NEAR(ratio, expect, 1e-9 * expect);
  }
}

TEST(Gamma, Examples) {
  EXPECT_DOUBLE_EQ(wb::gamma_exponent(wb::ModelSpec::type_a(1.0), 3), 3.0);
  EXPECT_DOUBLE_EQ(wb::gamma_exponent(wb::ModelSpec::type_b(1.0, 0.0), 2), 2.0);
  EXPECT_DOUBLE_EQ(wb::gamma_exponent(wb::ModelSpec::type_a(2.5), 1), 0.0);
  EXPECT_DOUBLE_EQ(wb::gamma_exponent(wb::ModelSpec::type_b(2.0, 1.5), 3), 2.0 * 6 + 1.5 * 2.0 * 3);
}

TEST(FrozenProfile, Examples) {
  const auto a2 = wb::frozen_profile(wb::ModelSpec::type_a(wb::kInfiniteBeta), 2);
  EXPECT_NEAR(a2[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a2[1], -1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(wb::frozen_profile(wb::ModelSpec::type_a(wb::kInfiniteBeta), 1), std::vector<double>{0.0});
  EXPECT_NEAR(wb::frozen_profile_b(1, 2.0)[0], 2.0, 1e-15);
  EXPECT_NEAR(wb::frozen_profile(wb::ModelSpec::type_b(wb::kInfiniteBeta, 2.0), 1)[0], 2.0, 1e-15);
  EXPECT_THROW(wb::frozen_profile(wb::ModelSpec::type_b(wb::kInfiniteBeta, 0.0), 2), wb::ArgumentError);
}

TEST(FrozenProfile, SolvesStationarityEquations) {
  for (int n = 1; n <= 12; ++n) {
    const auto z = wb::frozen_profile(wb::ModelSpec::type_a(wb::kInfiniteBeta), n);
    const auto d = wb::drift_normalized(z, wb::ModelSpec::type_a(1.0));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(d[i], z[i], 1e-10);
    for (double nu : {0.5, 1.0, 2.0, 5.0}) {
      const auto spec = wb::ModelSpec::type_b(wb::kInfiniteBeta, nu);
      const auto y = wb::frozen_profile(spec, n);
      const auto db = wb::drift_normalized(y, spec);
      for (int i = 0; i < n; ++i) EXPECT_NEAR(db[i], 0.5 * y[i], 1e-10);
    }
  }
}

TEST(FrozenFlow, Examples) {
  const auto inf_a = wb::ModelSpec::type_a(wb::kInfiniteBeta);
  const auto f = wb::frozen_flow(0.5, 0.0, inf_a, 2);
  EXPECT_NEAR(f[0], 1 / std::sqrt(2.0), 1e-15);
  const auto g = wb::frozen_flow(0.0, 1.0, inf_a, 2);
  EXPECT_NEAR(g[1], -1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(wb::frozen_flow(1.0, 0.0, wb::ModelSpec::type_b(wb::kInfiniteBeta, 2.0), 1)[0], 2.0, 1e-15);
  EXPECT_THROW(wb::frozen_flow(1.0, 1.0, wb::ModelSpec::type_b(wb::kInfiniteBeta, 2.0), 1), wb::UnsupportedError);
}

TEST(FrozenFlow, SatisfiesOde) {
  const auto inf_a = wb::ModelSpec::type_a(wb::kInfiniteBeta);
  for (int n = 2; n <= 6; ++n) {
    for (double c : {0.0, 1.0, 2.5}) {
      for (double t : {0.1, 0.7, 2.0}) {
        const double h = 1e-5;
        const auto xp = wb::frozen_flow(t + h, c, inf_a, n);
        const auto xm = wb::frozen_flow(t - h, c, inf_a, n);
        const auto x = wb::frozen_flow(t, c, inf_a, n);
        const auto rhs = wb::drift_normalized(x, inf_a);
        for (int i = 0; i < n; ++i) EXPECT_NEAR((xp[i] - xm[i]) / (2 * h), rhs[i], 1e-8);
      }
    }
  }
  const auto inf_b = wb::ModelSpec::type_b(wb::kInfiniteBeta, 1.5);
  for (int n = 1; n <= 5; ++n) {
    const double t = 0.8, h = 1e-5;
    const auto xp = wb::frozen_flow(t + h, 0.0, inf_b, n);
    const auto xm = wb::frozen_flow(t - h, 0.0, inf_b, n);
    const auto rhs = wb::drift_normalized(wb::frozen_flow(t, 0.0, inf_b, n), inf_b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR((xp[i] - xm[i]) / (2 * h), rhs[i], 1e-8);
  }
}

TEST(Generator, ConstantsAndLinearFunctions) {
  const auto spec = wb::ModelSpec::type_a(1.0);
  const std::vector<double> x{1.5, 0.2, -0.9};
  EXPECT_EQ(wb::apply_generator([](std::span<const double>, double) { return 1.0; }, x, 0.3, spec), 0.0);
  const auto e1 = [](std::span<const double> y, double) { return wb::elem_sym(1, y); };
  // second differences carry rounding of order eps * |f| / h^2
  EXPECT_NEAR(wb::apply_generator(e1, x, 0.3, spec), 0.0, 1e-7);
  EXPECT_THROW(wb::apply_generator(e1, std::vector<double>{1.0, 1.0}, 0.3, spec), wb::SingularInputError);
}

TEST(Generator, MatchesAnalyticValueOnQuadratic) {
  // f = |x|^2 in type A: generator = N / beta + 2 sum_i x_i b_i = N/beta + N(N-1)
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto spec = wb::ModelSpec::type_a(beta);
    const std::vector<double> x{2.0, 0.5, -0.1, -1.7};
    const auto f = [](std::span<const double> y, double) {
      double s = 0.0;
      for (double v : y) s += v * v;
      return s;
    };
    EXPECT_NEAR(wb::apply_generator(f, x, 0.0, spec), 4.0 / beta + 12.0, 1e-6);
    const auto terms = wb::generator_terms(f, x, 0.0, spec, 0.0, true);
    EXPECT_NEAR(terms.value(), 4.0 / beta + 12.0, 1e-7);
  }
}
