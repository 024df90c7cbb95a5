#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "thermoq/envelopes.hpp"
#include "thermoq/physics.hpp"
#include "thermoq/rng.hpp"
#include "thermoq/stochastic.hpp"

using namespace thermoq;

TEST_CASE("splittable RNG streams") {
    SplitMix64 a({7, 3}), b({7, 3}), c({7, 4}), d({8, 3});
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(c.next_u64() != d.next_u64());
    CHECK(SplitMix64({7, 3}).next_u64() != c.next_u64());

    // Uniforms live in [0, 1) and average to 1/2.
    SplitMix64 u({123, 0});
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));

    // Standard normal: mean 0, unit variance, always finite.
    SplitMix64 g({99, 1});
    double m = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = g.normal();
        CHECK(std::isfinite(z));
        m += z;
        m2 += z * z;
    }
    m /= n;
    m2 /= n;
    CHECK(m == doctest::Approx(0.0).scale(1.0).epsilon(5.0 / std::sqrt(n)));
    CHECK(m2 - m * m == doctest::Approx(1.0).epsilon(5.0 * 1.42 / std::sqrt(n)));

    // Block substreams are reproducible and distinct from the parent.
    RngSeed base{42, 17};
    SplitMix64 b0(block_seed(base, 5)), b1(block_seed(base, 5));
    CHECK(b0.next_u64() == b1.next_u64());
    CHECK(SplitMix64(block_seed(base, 6)).next_u64() != b0.next_u64());
}

TEST_CASE("Bose-Einstein sampler") {
    // Empty bath: always 0, but one uniform is still consumed so stream
    // positions stay aligned across parameter values.
    SplitMix64 r1({5, 5}), r2({5, 5});
    CHECK(sample_bose_einstein(0.0, r1) == 0);
    r2.uniform();
    CHECK(r1.next_u64() == r2.next_u64());

    // Mean n_bar, P(0) = 1/(1+n_bar), never negative.
    const double n_bar = 1.0;
    const int n = 200000;
    SplitMix64 rng({2024, 0});
    double sum = 0.0;
    long zeros = 0;
    for (int i = 0; i < n; ++i) {
        long k = sample_bose_einstein(n_bar, rng);
        CHECK(k >= 0);
        sum += double(k);
        if (k == 0) ++zeros;
    }
    double se_mean = std::sqrt(n_bar * (n_bar + 1.0) / n);
    CHECK(sum / n == doctest::Approx(n_bar).epsilon(5.0 * se_mean));
    CHECK(double(zeros) / n == doctest::Approx(0.5).epsilon(0.02));

    CHECK(sample_bose_einstein(0.0, RngSeed{1, 2}) == 0);
}

TEST_CASE("sampled Gaussian envelope agrees with the exact average") {
    struct Point {
        double alpha, sigma_sq, exact;
    };
    const Point pts[] = {
        {1.0, 1.0, 0.59552453181374476},
        {2.0, 0.1, 0.74767676173746156},
        {0.5, 4.0, 0.68738676168853363},
    };
    std::uint64_t stream = 11;
    for (const Point& p : pts) {
        // Choose lambda so (2 pi lambda tau)^2 n(n+1) = sigma^2 at
        // tau = 1 s, n_bar = 1.
        double lambda_hz = std::sqrt(p.sigma_sq / 2.0) / two_pi;
        auto est = mc_coherence_envelope(p.alpha, lambda_hz, 1.0, 1.0, 20000,
                                         {90210, stream++},
                                         PhaseStatistics::gaussian);
        CHECK(est.mean.imag() == 0.0);
        CHECK(est.std_error.real() > 0.0);
        CHECK(std::abs(est.mean.real() - p.exact) <=
              3.0 * est.std_error.real());
        // Sanity: the sigma^2 reconstruction matches the envelope input.
        CHECK(phase_variance(lambda_hz, 1.0, 1.0) ==
              doctest::Approx(p.sigma_sq).epsilon(1e-12));
    }

    // Byte determinism: identical seeds give identical bits.
    auto e1 = mc_coherence_envelope(1.0, 1e4, 1e-5, 1.0, 8192, {1, 2},
                                    PhaseStatistics::gaussian);
    auto e2 = mc_coherence_envelope(1.0, 1e4, 1e-5, 1.0, 8192, {1, 2},
                                    PhaseStatistics::gaussian);
    CHECK(e1.mean.real() == e2.mean.real());
    CHECK(e1.std_error.real() == e2.std_error.real());
    CHECK(e1.shots == 8192);
}

TEST_CASE("discrete phase ensemble: aliasing point and reference sum") {
    // 2 pi lambda tau = pi: even occupations leave the probe alone, odd ones
    // are suppressed by e^{-4 alpha^2}, so C = (1+n + e^{-4a^2} n)/(1+2n).
    // A Gaussian phase model gets this point badly wrong -- that is the
    // point of the discrete oracle.
    const double aliased =
        (1.0 + 1.0 + std::exp(-16.0) * 1.0) / (1.0 + 2.0 * 1.0);
    CHECK(discrete_coherence_reference(2.0, 5e4, 1e-5, 1.0) ==
          doctest::Approx(aliased).epsilon(1e-12));
    CHECK(discrete_coherence_reference(2.0, 5e4, 1e-5, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(discrete_coherence_reference(2.0, 5e4, 1e-5, 8.3043733888619861e-3) ==
          doctest::Approx(0.99183129942502493).epsilon(1e-12));
    CHECK(discrete_coherence_reference(2.0, 5e4, 1e-5, 0.0) == 1.0);

    auto est = mc_coherence_envelope(2.0, 5e4, 1e-5, 1.0, 20000, {90210, 22},
                                     PhaseStatistics::discrete_thermal);
    CHECK(est.mean.imag() == 0.0);
    CHECK(std::abs(est.mean.real() - aliased) <= 3.0 * est.std_error.real());

    double gauss_model = coherence_envelope_exact(
        2.0, phase_variance(5e4, 1e-5, 1.0));
    CHECK(std::abs(gauss_model - aliased) > 30.0 * est.std_error.real());
}

TEST_CASE("thermal jump trajectories") {
    auto traj = simulate_thermal_trajectory(1.0, 1e3, 1e-3, {77, 0});
    REQUIRE(!traj.times.empty());
    CHECK(traj.times[0] == 0.0);
    CHECK(traj.times.size() == traj.photon_numbers.size());
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        CHECK(traj.times[k] > traj.times[k - 1]);
        // Birth-death: single-photon steps.
        CHECK(std::abs(traj.photon_numbers[k] - traj.photon_numbers[k - 1]) ==
              1);
    }
    for (long n : traj.photon_numbers) CHECK(n >= 0);

    // value_at returns the piece the time falls in.
    CHECK(traj.value_at(0.0) == traj.photon_numbers[0]);
    if (traj.times.size() > 1) {
        double mid = 0.5 * (traj.times[0] + traj.times[1]);
        CHECK(traj.value_at(mid) == traj.photon_numbers[0]);
        CHECK(traj.value_at(traj.times[1]) == traj.photon_numbers[1]);
    }

    // integral equals the hand-rolled piecewise sum.
    double tau = 1e-3, manual = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        double hi = (k + 1 < traj.times.size())
                        ? std::min(traj.times[k + 1], tau)
                        : tau;
        if (traj.times[k] >= tau) break;
        manual += double(traj.photon_numbers[k]) * (hi - traj.times[k]);
    }
    CHECK(traj.integral(tau) == doctest::Approx(manual).epsilon(1e-14));

    // Stationary start: ensemble mean at t = tau/2 stays n_bar.
    const int n_traj = 20000;
    double sum = 0.0;
    for (int i = 0; i < n_traj; ++i)
        sum += double(
            simulate_thermal_trajectory(1.0, 1e3, 1e-4, {314, std::uint64_t(i)})
                .value_at(5e-5));
    double se = std::sqrt(2.0 / n_traj);
    CHECK(sum / n_traj == doctest::Approx(1.0).epsilon(5.0 * se));
}

TEST_CASE("trajectory autocorrelation matches the exponential law") {
    const double n_bar = 1.0, kappa_hz = 1e3, tau = 1e-3;
    const double inv_k = 1.0 / (two_pi * kappa_hz);
    std::vector<double> lags = {0.5 * inv_k, inv_k, 2.0 * inv_k};
    auto acf = trajectory_autocorrelation(n_bar, kappa_hz, tau, lags, 20000,
                                          {424242, 0});
    REQUIRE(acf.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(acf[k].lag_s == lags[k]);
        CHECK(acf[k].reference ==
              doctest::Approx(2.0 * std::exp(-two_pi * kappa_hz * lags[k]))
                  .epsilon(1e-13));
        CHECK(std::abs(acf[k].value - acf[k].reference) <=
              3.0 * acf[k].std_error);
    }
    CHECK(trajectory_autocorrelation(n_bar, kappa_hz, tau, {}, 100, {1, 1})
              .empty());
    CHECK_THROWS_AS((void)trajectory_autocorrelation(n_bar, kappa_hz, tau,
                                                     {-1e-5}, 100, {1, 1}),
                    std::domain_error);
}

TEST_CASE("stationary marginal passes the chi-squared gate") {
    auto chi = stationarity_chisq(1.0, 1e3, 1e-3, 20000, {424242, 1});
    CHECK(chi.dof >= 1);
    CHECK(chi.dof <= 10);
    CHECK(chi.statistic >= 0.0);
    CHECK(chi.critical_p001 > 0.0);
    CHECK(chi.pass);
    CHECK_THROWS_AS(
        (void)stationarity_chisq(0.0, 1e3, 1e-3, 100, {1, 1}),
        std::domain_error);
}

TEST_CASE("sampled qubit envelope against the dephasing closed form") {
    // Quasi-static corner: kappa*tau = 1e-3, Gamma = 3e-3.
    {
        auto est = mc_qubit_only_envelope(27390.692229025935, 1.0, 1e3,
                                          1.5915494309189535e-7, 20000,
                                          {90210, 31});
        auto ref = qubit_only_envelope(27390.692229025935, 1.0, 1e3,
                                       1.5915494309189535e-7);
        CHECK(std::abs(est.mean.real() - ref.amplitude * std::cos(ref.phase)) <=
              3.0 * est.std_error.real());
        CHECK(std::abs(est.mean.imag() + ref.amplitude * std::sin(ref.phase)) <=
              3.0 * est.std_error.imag());
    }
    // Markovian corner: kappa*tau = 500, Gamma = 0.1.
    {
        auto est = mc_qubit_only_envelope(5000.0, 1.0, 1e6,
                                          7.9577471545947675e-5, 5000,
                                          {90210, 32});
        auto ref =
            qubit_only_envelope(5000.0, 1.0, 1e6, 7.9577471545947675e-5);
        CHECK(std::abs(est.mean.real() - ref.amplitude * std::cos(ref.phase)) <=
              3.0 * est.std_error.real());
        CHECK(std::abs(est.mean.imag() + ref.amplitude * std::sin(ref.phase)) <=
              3.0 * est.std_error.imag());
    }
}
