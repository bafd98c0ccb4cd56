#include "kk7/sim/reference.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace kk7;

namespace {

constexpr double kL = 40;

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Soliton u9 at mu = 1, centred in the domain.
Reference soliton() { return closed_form_reference(catalog_entry("u9"), {{"mu", 1}}, kL / 2); }

GridState soliton_state(std::size_t n = 256) {
  auto ref = soliton();
  return GridState::sample(n, kL, [&](double x) { return ref(x, 0); });
}

SimConfig kk7_config(double dt, double T, TimeScheme scheme = TimeScheme::EtdRk4) {
  return SimConfig{preset("kk7"), dt, T, 2.5, scheme};
}

}  // namespace

TEST(Dft, RoundTrip) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<cplx> x(256);
  for (auto& v : x) v = {g(rng), g(rng)};
  auto y = idft(dft(x));
  double err = 0, norm = 0;
  for (std::size_t j = 0; j < x.size(); ++j) err = std::max(err, std::abs(y[j] - x[j])), norm = std::max(norm, std::abs(x[j]));
  EXPECT_LT(err / norm, 1e-12);
}

TEST(Dft, DeltaIsFlat) {
  std::vector<cplx> x(64, 0.0);
  x[0] = 1;
  for (const auto& X : dft(x)) EXPECT_NEAR(std::abs(X - cplx(1)), 0, 1e-15);
}

TEST(Dft, Parseval) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> x(128);
  for (auto& v : x) v = u(rng);
  double lhs = 0, rhs = 0;
  for (double v : x) lhs += v * v;
  for (const auto& X : dft(x)) rhs += std::norm(X);
  EXPECT_NEAR(lhs, rhs / 128, 1e-12 * lhs);
}

TEST(Dft, LengthMustBePowerOfTwo) {
  EXPECT_THROW(dft(std::vector<cplx>(48)), std::invalid_argument);
  EXPECT_THROW(idft(std::vector<cplx>(0)), std::invalid_argument);
}

TEST(Spectral, SineDerivative) {
  const std::size_t n = 256;
  SpectralOperator op(n, kL, PdeCoefficients{}, 2.5);
  for (int m = 1; m <= static_cast<int>(n / 4); ++m) {
    const double w = 2 * M_PI * m / kL;
    auto s = GridState::sample(n, kL, [&](double x) { return std::sin(w * x); });
    auto d = op.derivative(s.values, 1);
    double err = 0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(d[j] - w * std::cos(w * s.x(j))));
    EXPECT_LT(err, 1e-10) << "m = " << m;
  }
}

TEST(Spectral, PaddedGrid) {
  SpectralOperator op(256, kL, preset("kk7"), 2.5);
  EXPECT_EQ(op.padded_size(), 640u);
  EXPECT_THROW(SpectralOperator(100, kL, preset("kk7"), 2.5), std::invalid_argument);
}

TEST(Rhs, ConstantGivesZero) {
  auto s = GridState::sample(64, kL, [](double) { return 0.3; });
  EXPECT_EQ(max_abs(rhs_eval(s, kk7_config(1e-7, 0))), 0);
  EXPECT_LT(max_abs(linear_part(s)), 1e-14);
}

TEST(Rhs, LinearTermLeftToIntegrator) {
  auto s = GridState::sample(64, kL, [](double x) { return std::sin(2 * M_PI * x / kL); });
  SimConfig cfg = kk7_config(1e-7, 0);
  cfg.coefficients = make_coefficients(0, 0, 0, 0, 0, 0, 0);
  EXPECT_EQ(max_abs(rhs_eval(s, cfg)), 0);
}

TEST(Rhs, MatchesExactTimeDerivative) {
  // Oracle: the closed form differentiated symbolically in t. Both sides are periodized: the
  // seventh derivative turns the e^-20 mismatch at the wrap into errors near 1e-4.
  const auto u9 = catalog_entry("u9");
  ClosedFormSolution ut = u9;
  ut.expr = differentiate(u9.expr, "t");
  auto exact = periodize(closed_form_reference(ut, {{"mu", 1}}, kL / 2), kL, kL / 2);
  auto profile = periodize(soliton(), kL, kL / 2);
  auto s = GridState::sample(256, kL, [&](double x) { return profile(x, 0); });
  auto nl = rhs_eval(s, kk7_config(1e-7, 0));
  auto lin = linear_part(s);
  double err = 0;
  for (std::size_t j = 0; j < s.n; ++j) err = std::max(err, std::abs(nl[j] + lin[j] - exact(s.x(j), 0)));
  EXPECT_LT(err, 1e-8);
}

TEST(Integrate, ConstantIsFixedPoint) {
  auto s0 = GridState::sample(64, kL, [](double) { return -0.25; });
  auto s = integrate(s0, kk7_config(1e-6, 1e-3));
  for (double v : s.values) EXPECT_NEAR(v, -0.25, 1e-15);
  EXPECT_DOUBLE_EQ(s.time, 1e-3);
}

TEST(Integrate, ZeroStaysZero) {
  auto s0 = GridState::sample(64, kL, [](double) { return 0.0; });
  EXPECT_EQ(max_abs(integrate(s0, kk7_config(1e-6, 1e-3)).values), 0);
}

TEST(Integrate, ShortSolitonRun) {
  auto ref = soliton();
  auto s = integrate(soliton_state(), kk7_config(1e-7, 2e-3));
  EXPECT_LT(diagnostics(s, ref).max_error, 1e-8);
}

TEST(Integrate, IntegratingFactorCrossCheck) {
  auto ref = soliton();
  auto s0 = soliton_state();
  auto etd = integrate(s0, kk7_config(1e-7, 2e-4));
  auto ifr = integrate(s0, kk7_config(1e-8, 2e-4, TimeScheme::IfRk4));
  EXPECT_LT(diagnostics(ifr, ref).max_error, 1e-8);
  double diff = 0;
  for (std::size_t j = 0; j < s0.n; ++j) diff = std::max(diff, std::abs(etd.values[j] - ifr.values[j]));
  EXPECT_LT(diff, 1e-9);
}

TEST(Integrate, FourthOrderInTime) {
  // On a coarse grid the linear symbol is mild and the temporal error dominates.
  auto s0 = soliton_state(32);
  for (auto scheme : {TimeScheme::EtdRk4, TimeScheme::IfRk4}) {
    auto levels = refinement_study(s0, kk7_config(2.5e-3, 1, scheme), 3);
    for (std::size_t l = 1; l < levels.size(); ++l) {
      const double ratio = levels[l - 1].error / levels[l].error;
      EXPECT_GT(ratio, 12) << scheme_name(scheme) << " dt = " << levels[l].dt;
      EXPECT_LT(ratio, 24) << scheme_name(scheme) << " dt = " << levels[l].dt;
    }
  }
}

TEST(Integrate, BlowUpReportsStep) {
  auto s0 = GridState::sample(16, kL, [&, ref = soliton()](double x) { return 4 * ref(x, 0); });
  try {
    integrate(s0, kk7_config(0.1, 1));
    FAIL() << "expected a blow-up";
  } catch (const SimulationError& e) {
    EXPECT_GT(e.step(), 0);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
  std::vector<std::string> log;
  auto s = integrate_with_retry(s0, kk7_config(0.1, 1), 4, [&](const std::string& m) { log.push_back(m); });
  EXPECT_FALSE(log.empty());
  EXPECT_DOUBLE_EQ(s.time, 1);
  EXPECT_THROW(integrate_with_retry(s0, kk7_config(0.1, 1), 0), SimulationError);
}

TEST(Integrate, InvalidInput) {
  auto s0 = soliton_state(64);
  EXPECT_THROW(integrate(s0, kk7_config(0, 1)), std::invalid_argument);
  EXPECT_THROW(integrate(s0, kk7_config(1e-3, -1)), std::invalid_argument);
  SimConfig low = kk7_config(1e-3, 1);
  low.dealias = 2;
  EXPECT_THROW(integrate(s0, low), std::invalid_argument);
  GridState bad = s0;
  bad.values[3] = std::nan("");
  EXPECT_THROW(integrate(bad, kk7_config(1e-3, 1)), std::invalid_argument);
  EXPECT_THROW(GridState::sample(24, kL, [](double) { return 0.0; }), std::invalid_argument);
  EXPECT_THROW(closed_form_reference(catalog_entry("u1"), {}), std::invalid_argument);
}

TEST(Diagnostics, ConstantMass) {
  auto s = GridState::sample(64, 32, [](double) { return 0.75; });
  EXPECT_EQ(diagnostics(s).mass, 24);
  EXPECT_TRUE(std::isnan(diagnostics(s).max_error));
}

TEST(Diagnostics, ErrorAgainstItself) {
  auto ref = soliton();
  EXPECT_EQ(diagnostics(soliton_state(), ref).max_error, 0);
}

TEST(Diagnostics, MassConservedForFluxForm) {
  EXPECT_TRUE(conserves_mass(preset("kk7")));
  EXPECT_FALSE(conserves_mass(make_coefficients(0, 1, 0, 0, 0, 0, 0)));
  auto s0 = soliton_state();
  auto s = integrate(s0, kk7_config(1e-7, 2e-3));
  const double m0 = diagnostics(s0).mass;
  EXPECT_LT(std::abs(diagnostics(s).mass - m0) / std::abs(m0), 1e-10);
}

TEST(Diagnostics, CsvOutput) {
  std::vector<Diagnostics> rows;
  auto ref = soliton();
  integrate(soliton_state(64), kk7_config(1e-6, 1e-5), [&](const GridState& s) { rows.push_back(diagnostics(s, ref)); }, 5);
  EXPECT_EQ(rows.size(), 3u);  // t = 0, after 5 steps, final
  std::ostringstream series, state;
  write_series_csv(series, rows);
  EXPECT_EQ(series.str().substr(0, series.str().find('\n')), "t,mass,l2,max_error");
  write_state_csv(state, soliton_state(16));
  const std::string text = state.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 17);
}
