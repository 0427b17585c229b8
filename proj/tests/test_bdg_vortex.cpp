#include "mzm/bdg_vortex.hpp"
#include "bdg_checks.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace mzm::bdg;

namespace {

PhysicalParams generic() { return PhysicalParams{}; }

PhysicalParams with_mu(double mu) {
  auto p = generic();
  p.mu = mu;
  return p;
}

}  // namespace

TEST(PhysicalParams, DerivedQuantities) {
  const auto p = generic();
  EXPECT_DOUBLE_EQ(p.fermi_velocity(), std::sqrt(2.0));
  EXPECT_NEAR(p.envelope_rate(), 0.5 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(p.kappa_squared(), 2.0 - 0.125, 1e-15);
}

TEST(PhysicalParams, Validation) {
  auto p = generic();
  p.mass = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = generic();
  p.xi = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = generic();
  p.mu = std::nan("");
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(WeakZeroMode, GenericProfile) {
  const auto prof = weak_zero_mode(generic());
  EXPECT_EQ(prof.branch(), ExteriorBranch::oscillatory);
  EXPECT_FALSE(prof.critical());
  EXPECT_NEAR(prof.norm(), 1.0, 1e-8);
  EXPECT_LT(majorana_condition_residual(prof), 1e-10);
  EXPECT_NEAR(prof.decay_rate(), generic().envelope_rate(), 0.02 * generic().envelope_rate());
  EXPECT_EQ(prof.samples().size(), 2000u);
}

TEST(WeakZeroMode, MatchesValueAndDerivativeAtCore) {
  const auto prof = weak_zero_mode(generic());
  const double xi = prof.params().xi;
  EXPECT_NEAR(prof.interior_chi(xi), prof.exterior_chi(xi), 1e-13);
  EXPECT_NEAR(prof.interior_chi_derivative(xi), prof.exterior_chi_derivative(xi), 1e-12);
}

TEST(WeakZeroMode, PaperConstantsReproduceExterior) {
  const auto p = generic();
  const auto prof = weak_zero_mode(p);
  const double k = prof.kappa(), lambda = p.envelope_rate();
  for (double r : {1.0, 2.5, 7.0, 15.0}) {
    const double paper = (prof.B().real() * mzm::specfun::bessel_j0(k * r).value +
                          prof.C().real() * mzm::specfun::bessel_y0(k * r).value) *
                         std::exp(-lambda * r);
    EXPECT_NEAR(paper, prof.exterior_chi(r), 1e-12 * std::max(1.0, std::fabs(paper)));
  }
}

TEST(WeakZeroMode, NormAgainstSimpsonOracle) {
  const auto p = generic();
  const auto prof = weak_zero_mode(p);
  auto dens = [&prof](double r) {
    const double c = prof.chi(r);
    return r * c * c;
  };
  const double inner = oracle::simpson(dens, 0.0, p.xi, 20000);
  const double outer = oracle::simpson(dens, p.xi, 200.0, 2000000);
  EXPECT_NEAR(4.0 * std::numbers::pi * (inner + outer), 1.0, 1e-8);
}

TEST(WeakZeroMode, SpinorStructure) {
  const auto prof = weak_zero_mode(generic());
  const std::complex<double> phase = std::polar(1.0, std::numbers::pi / 4.0);
  for (const auto& s : prof.samples()) {
    EXPECT_NEAR(std::abs(s.u - phase * prof.chi(s.rho)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.v - std::conj(phase) * prof.chi(s.rho)), 0.0, 1e-15);
  }
}

TEST(WeakZeroMode, IndependentOfInitialAmplitude) {
  WeakSolveOptions opt;
  opt.initial_amplitude = -37.5;
  const auto a = weak_zero_mode(generic());
  const auto b = weak_zero_mode(generic(), opt);
  for (double r : {0.3, 1.0, 4.0, 12.0}) EXPECT_NEAR(std::fabs(a.chi(r)), std::fabs(b.chi(r)), 1e-12);
}

TEST(WeakZeroMode, EquationResiduals) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 6; ++i) {
    const auto p = checks::random_weak_params(rng, i % 2 == 0);
    const auto prof = weak_zero_mode(p);
    EXPECT_LT(checks::interior_residual(prof), 1e-6) << "mu = " << p.mu;
    EXPECT_LT(checks::exterior_residual(prof), 1e-6) << "mu = " << p.mu;
  }
}

TEST(WeakZeroMode, FullExteriorEquationWithEnvelope) {
  // chi'' + (1/rho + 2 lambda) chi' + (2 m mu + lambda / rho) chi = 0 for the enveloped exterior.
  const auto p = generic();
  const auto prof = weak_zero_mode(p);
  const double lambda = p.envelope_rate();
  auto f = [&prof](double r) { return prof.exterior_chi(r); };
  for (double r = 1.1; r < 20.0; r += 0.37) {
    double d1 = 0.0, d2 = 0.0;
    checks::derivatives(f, r, 1e-2, d1, d2);
    const double terms[] = {d2, (1.0 / r + 2.0 * lambda) * d1, (2.0 * p.mass * p.mu + lambda / r) * f(r)};
    const double scale = std::fabs(terms[0]) + std::fabs(terms[1]) + std::fabs(terms[2]);
    EXPECT_LT(std::fabs(terms[0] + terms[1] + terms[2]) / scale, 1e-6) << "rho = " << r;
  }
}

TEST(WeakZeroMode, EvanescentBranch) {
  // Small mu with a large gap: kappa^2 < 0.
  PhysicalParams p;
  p.mu = 0.05;
  p.delta0 = 1.0;
  ASSERT_LT(p.kappa_squared(), 0.0);
  const auto prof = weak_zero_mode(p);
  EXPECT_EQ(prof.branch(), ExteriorBranch::evanescent);
  EXPECT_NEAR(prof.norm(), 1.0, 1e-8);
  EXPECT_LT(majorana_condition_residual(prof), 1e-10);
  EXPECT_LT(checks::exterior_residual(prof), 1e-6);
  EXPECT_NEAR(prof.decay_rate(), p.envelope_rate() - prof.kappa(), 0.02 * (p.envelope_rate() - prof.kappa()));
}

TEST(WeakZeroMode, CriticalKappa) {
  PhysicalParams p;
  const double vf = p.fermi_velocity();
  p.mu = p.delta0 * p.delta0 / (2.0 * p.mass * vf * vf);
  const auto prof = weak_zero_mode(p);
  EXPECT_TRUE(prof.critical());
  EXPECT_EQ(prof.branch(), ExteriorBranch::evanescent);
  EXPECT_EQ(prof.kappa(), 0.0);
  EXPECT_NEAR(prof.norm(), 1.0, 1e-8);
  EXPECT_LT(majorana_condition_residual(prof), 1e-10);
  EXPECT_NEAR(prof.interior_chi(p.xi), prof.exterior_chi(p.xi), 1e-12);
}

TEST(WeakZeroMode, RejectsStrongPairing) {
  EXPECT_THROW(weak_zero_mode(with_mu(-1.0)), PhaseError);
  EXPECT_THROW(weak_zero_mode(with_mu(0.0)), PhaseError);
}

TEST(MajoranaResidual, ConstructedViolations) {
  const auto prof = weak_zero_mode(generic());
  std::vector<ZeroModeSample> flipped(prof.samples());
  double max_u = 0.0;
  for (auto& s : flipped) {
    s.v = -s.v;
    max_u = std::max(max_u, std::abs(s.u));
  }
  EXPECT_NEAR(majorana_condition_residual(flipped), 2.0 * max_u, 1e-14);

  std::vector<ZeroModeSample> rotated(prof.samples());
  const auto phase = std::polar(1.0, std::numbers::pi / 4.0);
  for (auto& s : rotated) {
    s.u *= phase;
    s.v *= phase;
  }
  EXPECT_GT(majorana_condition_residual(rotated), 0.1 * max_u);
  EXPECT_THROW(majorana_condition_residual(std::span<const ZeroModeSample>{}), std::invalid_argument);
}

TEST(StrongPairing, ResidualStrictlyPositive) {
  const double r = strong_pairing_residual(with_mu(-1.0));
  EXPECT_GT(r, 0.0);
  // Hand evaluation with the same Bessel functions: q I1/I0 + kappa' K1/K0 + lambda.
  const auto p = with_mu(-1.0);
  const double q = std::sqrt(2.0), kp = kappa_prime(p);
  using namespace mzm::specfun;
  const double want = q * bessel_i1(q).value / bessel_i0(q).value + kp * bessel_k1(kp).value / bessel_k0(kp).value +
                      p.envelope_rate();
  EXPECT_NEAR(r, want, 1e-13);
}

TEST(StrongPairing, BoundedAwayFromZeroNearTransition) {
  double smallest = 1e300;
  for (double mu = -1.0; mu < 0.0; mu /= 2.0) {
    if (mu > -1e-12) break;
    smallest = std::min(smallest, strong_pairing_residual(with_mu(mu)));
    smallest = std::min(smallest, strong_pairing_residual(with_mu(mu), StrongExterior::bare));
  }
  // kappa' -> lambda as mu -> 0-, and K1/K0 at lambda xi bounds the exterior term.
  EXPECT_GT(smallest, 0.5);
}

TEST(StrongPairing, Preconditions) {
  EXPECT_THROW(strong_pairing_residual(with_mu(1.0)), PhaseError);
  EXPECT_THROW(strong_pairing_residual(with_mu(0.0)), PhaseError);
}

TEST(StrongPairing, ScanHasNoSignChanges) {
  const auto rep = scan_strong_pairing(generic(), -5.0, -0.01, 500);
  EXPECT_EQ(rep.scan_points.size(), 500u);
  EXPECT_EQ(rep.sign_changes, 0);
  EXPECT_GT(rep.min_abs_residual, 0.0);
  EXPECT_NEAR(rep.kappa_prime, kappa_prime(with_mu(-0.01)), 1e-14);
  const auto bare = scan_strong_pairing(generic(), -5.0, -0.01, 500, StrongExterior::bare);
  EXPECT_EQ(bare.sign_changes, 0);
}

TEST(StrongPairing, SinglePointScan) {
  const auto rep = scan_strong_pairing(generic(), -1.0, -1.0, 1);
  ASSERT_EQ(rep.scan_points.size(), 1u);
  EXPECT_EQ(rep.scan_points[0].mu, -1.0);
  EXPECT_THROW(scan_strong_pairing(generic(), -1.0, 0.5, 10), PhaseError);
  EXPECT_THROW(scan_strong_pairing(generic(), -1.0, -2.0, 10), std::invalid_argument);
  EXPECT_THROW(scan_strong_pairing(generic(), -2.0, -1.0, 0), std::invalid_argument);
}

TEST(SignChanges, Counting) {
  const std::vector<double> v{1.0, 0.0, 2.0, -1.0, -3.0, 0.0, 4.0};
  EXPECT_EQ(count_sign_changes(v), 2);
  EXPECT_EQ(count_sign_changes(std::vector<double>{}), 0);
}

TEST(Minigap, Estimate) {
  PhysicalParams p;
  p.delta0 = p.fermi_energy();
  EXPECT_NEAR(minigap_estimate(p), p.delta0, 1e-15);
  const double gap = 2.0 * std::numbers::pi * 11e3;
  p.delta0 = gap;
  p.mass = 1.0;
  p.p_fermi = std::sqrt(2.0 * 10.0 * gap);
  EXPECT_NEAR(minigap_estimate(p), 2.0 * std::numbers::pi * 1.1e3, 1e-9);
}
