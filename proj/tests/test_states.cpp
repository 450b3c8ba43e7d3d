#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "mpjcm/states.hpp"

using namespace mpjcm;

namespace {

constexpr double kPi = std::numbers::pi;

// Coherent amplitude from log-gamma, independent of the library recurrence.
double poisson_amplitude(double alpha, long n) {
    if (alpha == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-0.5 * alpha * alpha + n * std::log(alpha) - 0.5 * std::lgamma(n + 1.0));
}

double norm_squared(const FieldState& s) {
    double total = 0.0;
    for (double c : s.amplitudes()) total += c * c;
    return total;
}

}  // namespace

TEST(CoherentState, AmplitudesMatchLogGammaForm) {
    for (double alpha : {0.0, 0.3, 1.0, 5.0, 9.5}) {
        const auto s = coherent_state(alpha);
        for (long n = 0; n <= s.n_max(); ++n)
            EXPECT_NEAR(s.amplitude(n), poisson_amplitude(alpha, n), 1e-13) << "alpha=" << alpha << " n=" << n;
    }
}

TEST(CoherentState, MeanPhotonIsAlphaSquared) {
    for (double alpha : {0.5, 1.0, 3.0, 5.0, 7.0}) EXPECT_NEAR(mean_photon(coherent_state(alpha)), alpha * alpha, 1e-11);
}

TEST(CoherentState, VacuumAtZeroAmplitude) {
    const auto s = coherent_state(0.0);
    EXPECT_DOUBLE_EQ(s.amplitude(0), 1.0);
    EXPECT_EQ(mean_photon(s), 0.0);
}

TEST(CoherentState, RejectsNegativeOrHugeAlpha) {
    EXPECT_THROW(coherent_state(-1.0), ConfigError);
    EXPECT_THROW(coherent_state(std::nan("")), ConfigError);
    EXPECT_THROW(coherent_state(40.0), ConfigError);
}

TEST(KPhotonState, OccupiesMultiplesOfK) {
    for (int k : {1, 2, 3, 5}) {
        const auto s = k_photon_coherent_state(2.0, k);
        for (long n = 0; n <= s.n_max(); ++n) {
            const double expected = n % k == 0 ? poisson_amplitude(2.0, n / k) : 0.0;
            EXPECT_NEAR(s.amplitude(n), expected, 1e-13) << "k=" << k << " n=" << n;
        }
        EXPECT_NEAR(mean_photon(s), k * 4.0, 1e-11);
    }
}

TEST(KPhotonState, RejectsBadK) { EXPECT_THROW(k_photon_coherent_state(1.0, 0), ConfigError); }

TEST(OrthogonalEvenState, VacuumAmplitudeMatchesClosedNormalization) {
    // sum over n = 0 mod 4 of x^n/n! = (cosh x + cos x)/2
    for (double alpha : {0.5, 1.0, 2.0, 7.0}) {
        const double x = alpha * alpha;
        const auto s = orthogonal_even_coherent_state(alpha);
        EXPECT_NEAR(s.amplitude(0), 1.0 / std::sqrt(0.5 * (std::cosh(x) + std::cos(x))), 1e-13 * (1 + s.amplitude(0)));
        EXPECT_NEAR(s.amplitude(0), 2.0 * orthogonal_even_normalization(alpha), 1e-13);
    }
}

TEST(OrthogonalEvenState, AlphaOneAmplitudes) {
    const auto s = orthogonal_even_coherent_state(1.0);
    const double c0 = 1.0 / std::sqrt(0.5 * (std::cosh(1.0) + std::cos(1.0)));
    EXPECT_NEAR(s.amplitude(0), c0, 1e-14);
    EXPECT_NEAR(s.amplitude(4), c0 / std::sqrt(24.0), 1e-14);
    EXPECT_NEAR(s.amplitude(8), c0 / std::sqrt(40320.0), 1e-14);
    EXPECT_NEAR(orthogonal_even_normalization(1.0), 0.4898920, 1e-6);
    EXPECT_NEAR(s.amplitude(0), 0.9797839, 1e-6);
    EXPECT_NEAR(s.amplitude(4), 0.1999985, 1e-6);
}

TEST(OrthogonalEvenState, MeanPhotonClosedForm) {
    // <n> = x (sinh x - sin x) / (cosh x + cos x)
    for (double alpha : {1.0, 2.0, 7.0}) {
        const double x = alpha * alpha;
        const double expected = x * (std::sinh(x) - std::sin(x)) / (std::cosh(x) + std::cos(x));
        EXPECT_NEAR(mean_photon(orthogonal_even_coherent_state(alpha)), expected, 1e-11 * (1 + expected));
    }
    EXPECT_NEAR(mean_photon(orthogonal_even_coherent_state(1.0)), 0.160187, 1e-6);
}

TEST(ParityStates, LowestAmplitudes) {
    EXPECT_NEAR(parity_coherent_state(1.0, Parity::even).amplitude(0), 1.0 / std::sqrt(std::cosh(1.0)), 1e-14);
    EXPECT_NEAR(parity_coherent_state(1.0, Parity::even).amplitude(2), 1.0 / std::sqrt(2.0 * std::cosh(1.0)), 1e-14);
    EXPECT_NEAR(parity_coherent_state(1.0, Parity::odd).amplitude(1), 1.0 / std::sqrt(std::sinh(1.0)), 1e-14);
    EXPECT_NEAR(parity_coherent_state(1.0, Parity::odd).amplitude(3), 1.0 / std::sqrt(6.0 * std::sinh(1.0)), 1e-14);
}

TEST(ParityStates, OddVacuumIsInvalid) {
    EXPECT_THROW(parity_coherent_state(0.0, Parity::odd), InvalidStateError);
    EXPECT_NO_THROW(parity_coherent_state(0.0, Parity::even));
}

TEST(FieldStateProperties, EveryFactoryIsNormalized) {
    for (double alpha : {0.1, 1.0, 3.0, 5.0, 7.0, 10.0}) {
        for (int m : {1, 3, 4}) {
            const Truncation trunc = Truncation::automatic(m);
            const FieldState states[] = {coherent_state(alpha, trunc), k_photon_coherent_state(alpha, 3, trunc),
                                         orthogonal_even_coherent_state(alpha, trunc),
                                         parity_coherent_state(alpha, Parity::even, trunc),
                                         parity_coherent_state(alpha, Parity::odd, trunc)};
            for (const auto& s : states) {
                EXPECT_NEAR(norm_squared(s), 1.0, kNormTolerance) << s.label();
                EXPECT_GE(s.n_max(), default_n_max(0.0, m)) << s.label();
            }
        }
    }
}

TEST(FieldStateProperties, AutomaticTruncationDropsLessThanTailBudget) {
    for (double alpha : {0.5, 3.0, 7.0, 12.0}) {
        const auto s = coherent_state(alpha);
        double tail = 0.0;
        for (long n = s.n_max() + 1; n < s.n_max() + 400; ++n) tail += std::pow(poisson_amplitude(alpha, n), 2);
        EXPECT_LE(tail, kTailBudget) << "alpha=" << alpha;
    }
}

TEST(FieldStateProperties, ParitySelection) {
    const auto even = parity_coherent_state(3.0, Parity::even);
    const auto odd = parity_coherent_state(3.0, Parity::odd);
    const auto quad = orthogonal_even_coherent_state(3.0);
    for (long n = 0; n <= even.n_max(); ++n) {
        if (n % 2 == 1) EXPECT_EQ(even.amplitude(n), 0.0);
        if (n % 2 == 0) EXPECT_EQ(odd.amplitude(n), 0.0);
        if (n % 4 != 0) EXPECT_EQ(quad.amplitude(n), 0.0);
    }
}

TEST(Truncation, FixedLevelTooSmallIsABudgetError) {
    EXPECT_THROW(coherent_state(5.0, Truncation::fixed(20)), TruncationError);
    EXPECT_THROW(coherent_state(5.0, Truncation::fixed(20)), NumericBudgetError);
    EXPECT_NO_THROW(coherent_state(5.0, Truncation::fixed(100)));
    EXPECT_EQ(coherent_state(5.0, Truncation::fixed(100)).n_max(), 100);
    EXPECT_THROW(coherent_state(1.0, Truncation::fixed(-1)), ConfigError);
}

TEST(Truncation, DefaultLevelFormula) {
    EXPECT_EQ(default_n_max(25.0, 1), 25 + 51 + 1 + 4);
    EXPECT_EQ(default_n_max(0.0, 3), 10 + 3 + 4);
}

TEST(Truncation, AutomaticGrowsForWideSupport) {
    const auto s = k_photon_coherent_state(3.0, 5);
    EXPECT_GT(s.n_max(), default_n_max(mean_photon(s), 1));
    EXPECT_NEAR(norm_squared(s), 1.0, kNormTolerance);
}

TEST(FieldState, FromAmplitudesNormalizesAndRejectsZero) {
    const auto s = FieldState::from_amplitudes({3.0, 4.0}, "custom");
    EXPECT_DOUBLE_EQ(s.amplitude(0), 0.6);
    EXPECT_DOUBLE_EQ(s.amplitude(1), 0.8);
    EXPECT_EQ(s.amplitude(2), 0.0);
    EXPECT_EQ(s.amplitude(-1), 0.0);
    EXPECT_THROW(FieldState::from_amplitudes({0.0, 0.0}, "empty"), InvalidStateError);
}

TEST(AtomState, CanonicalRange) {
    const AtomState a(3 * kPi / 4, 0.0);
    EXPECT_NEAR(a.theta(), kPi / 4, 1e-15);
    EXPECT_NEAR(a.phi(), kPi, 1e-15);
    const AtomState b(kPi / 3, -kPi / 2);
    EXPECT_NEAR(b.phi(), 3 * kPi / 2, 1e-15);
    EXPECT_THROW(AtomState(std::nan(""), 0.0), ConfigError);
}

TEST(AtomState, CanonicalizationPreservesTheStateUpToGlobalPhase) {
    // (cos t, e^{-i p} sin t) before and after reduction differ by a phase.
    for (double theta : {-2.0, 0.4, 1.9, 2.8, 7.0}) {
        for (double phi : {-1.0, 0.0, 2.5, 9.0}) {
            const AtomState a(theta, phi);
            const std::complex<double> u0{std::cos(theta), 0.0};
            const auto d0 = std::polar(std::sin(theta), -phi);
            const std::complex<double> u1{std::cos(a.theta()), 0.0};
            const auto d1 = std::polar(std::sin(a.theta()), -a.phi());
            EXPECT_NEAR(std::abs(std::conj(u0) * u1 + std::conj(d0) * d1), 1.0, 1e-12);
        }
    }
}

TEST(Classification, NaturalPhenomenonNeedsSpacingThree) {
    EXPECT_FALSE(natural_phenomenon_class(coherent_state(2.0)));
    EXPECT_FALSE(natural_phenomenon_class(parity_coherent_state(2.0, Parity::even)));
    EXPECT_TRUE(natural_phenomenon_class(k_photon_coherent_state(2.0, 3)));
    EXPECT_TRUE(natural_phenomenon_class(orthogonal_even_coherent_state(7.0)));
}

TEST(Classification, SupportSpacing) {
    EXPECT_EQ(support_spacing(coherent_state(2.0)), 1);
    EXPECT_EQ(support_spacing(parity_coherent_state(2.0, Parity::odd)), 2);
    EXPECT_EQ(support_spacing(k_photon_coherent_state(2.0, 3)), 3);
    EXPECT_EQ(support_spacing(orthogonal_even_coherent_state(7.0)), 4);
    EXPECT_EQ(support_spacing(coherent_state(0.0, Truncation::fixed(4))), 0);
}

TEST(PhotonDistribution, SumsToOne) {
    const auto p = photon_distribution(coherent_state(4.0));
    double total = 0.0;
    for (double v : p) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(CoherentState, AlphaOneExamples) {
    const auto s = coherent_state(1.0);
    EXPECT_NEAR(s.amplitude(0), 0.60653, 1e-5);
    EXPECT_NEAR(s.amplitude(1), 0.60653, 1e-5);
    EXPECT_NEAR(photon_distribution(s)[0], std::exp(-1.0), 1e-14);
    const auto k1 = k_photon_coherent_state(1.0, 1);
    for (long n = 0; n <= s.n_max(); ++n) EXPECT_EQ(k1.amplitude(n), s.amplitude(n));
}
