#include "thermoq/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "thermoq/envelopes.hpp"
#include "thermoq/kernels.hpp"
#include "thermoq/physics.hpp"

namespace thermoq {

namespace {

struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

constexpr long kBlockShots = 4096;

// Sample variance from Kahan-accumulated sum and sum of squares.
double sample_variance(double sum, double sum_sq, double n) {
    if (n < 2.0) return 0.0;
    double mean = sum / n;
    return std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
}

void simulate_into(double n_bar, double kappa_rad, double tau_s,
                   SplitMix64& rng, JumpTrajectory& traj) {
    traj.times.clear();
    traj.photon_numbers.clear();
    long n = sample_bose_einstein(n_bar, rng);
    traj.times.push_back(0.0);
    traj.photon_numbers.push_back(n);

    double t = 0.0;
    for (long jumps = 0;; ++jumps) {
        if (jumps >= 10'000'000)
            throw std::runtime_error(
                "simulate_thermal_trajectory: jump budget exhausted "
                "(kappa * tau too large)");
        double up = kappa_rad * n_bar * double(n + 1);
        double down = kappa_rad * (1.0 + n_bar) * double(n);
        double total = up + down;
        if (total <= 0.0) break;  // n_bar = 0 and n = 0: nothing can happen
        t += -std::log1p(-rng.uniform()) / total;
        if (t >= tau_s) break;
        n += (rng.uniform() * total < up) ? 1 : -1;
        traj.times.push_back(t);
        traj.photon_numbers.push_back(n);
    }
}

}  // namespace

long JumpTrajectory::value_at(double t) const {
    if (times.empty()) throw std::logic_error("value_at on empty trajectory");
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return photon_numbers.front();
    return photon_numbers[std::size_t(it - times.begin()) - 1];
}

double JumpTrajectory::integral(double tau_s) const {
    KahanSum acc;
    for (std::size_t k = 0; k < times.size(); ++k) {
        double start = times[k];
        if (start >= tau_s) break;
        double end =
            (k + 1 < times.size()) ? std::min(times[k + 1], tau_s) : tau_s;
        acc.add(double(photon_numbers[k]) * (end - start));
    }
    return acc.s;
}

JumpTrajectory simulate_thermal_trajectory(double n_bar, double kappa_hz,
                                           double tau_s, RngSeed seed) {
    if (n_bar < 0.0)
        throw std::domain_error("simulate_thermal_trajectory: n_bar < 0");
    if (kappa_hz < 0.0)
        throw std::domain_error("simulate_thermal_trajectory: kappa < 0");
    if (!(tau_s >= 0.0))
        throw std::domain_error("simulate_thermal_trajectory: bad tau");
    SplitMix64 rng(seed);
    JumpTrajectory traj;
    simulate_into(n_bar, two_pi * kappa_hz, tau_s, rng, traj);
    return traj;
}

McEstimate mc_coherence_envelope(double alpha, double lambda_hz, double tau_s,
                                 double n_bar, long shots, RngSeed seed,
                                 PhaseStatistics statistics) {
    if (shots <= 0)
        throw std::domain_error("mc_coherence_envelope: shots must be > 0");
    if (alpha < 0.0 || n_bar < 0.0 || !(tau_s >= 0.0))
        throw std::domain_error("mc_coherence_envelope: bad parameters");

    const double A = 2.0 * alpha * alpha;
    const double angle_per_photon = two_pi * lambda_hz * tau_s;
    const double sigma =
        (statistics == PhaseStatistics::gaussian)
            ? std::sqrt(phase_variance(lambda_hz, tau_s, n_bar))
            : 0.0;

    std::vector<double> u1(kBlockShots), u2(kBlockShots);
    std::vector<double> phi(kBlockShots), w(kBlockShots);
    KahanSum sum, sum_sq;
    long done = 0;
    for (std::uint64_t b = 0; done < shots; ++b) {
        long m = std::min<long>(kBlockShots, shots - done);
        SplitMix64 rng(block_seed(seed, b));
        if (statistics == PhaseStatistics::gaussian) {
            for (long i = 0; i < m; ++i) {
                u1[std::size_t(i)] = rng.uniform();
                u2[std::size_t(i)] = rng.uniform();
            }
            kernels::boxmuller_phases(sigma, u1.data(), u2.data(), phi.data(),
                                      std::size_t(m));
        } else {
            // Integer sampling stays scalar in every SIMD mode.
            for (long i = 0; i < m; ++i)
                phi[std::size_t(i)] =
                    angle_per_photon * double(sample_bose_einstein(n_bar, rng));
        }
        kernels::ramsey_weights(A, phi.data(), w.data(), std::size_t(m));

        KahanSum bs, bsq;
        for (long i = 0; i < m; ++i) {
            bs.add(w[std::size_t(i)]);
            bsq.add(w[std::size_t(i)] * w[std::size_t(i)]);
        }
        sum.add(bs.s);
        sum_sq.add(bsq.s);
        done += m;
    }

    double n = double(shots);
    McEstimate est;
    est.mean = {sum.s / n, 0.0};
    est.std_error = {std::sqrt(sample_variance(sum.s, sum_sq.s, n) / n), 0.0};
    est.shots = shots;
    return est;
}

double discrete_coherence_reference(double alpha, double lambda_hz,
                                    double tau_s, double n_bar) {
    if (alpha < 0.0 || n_bar < 0.0)
        throw std::domain_error("discrete_coherence_reference: bad parameters");
    const double A = 2.0 * alpha * alpha;
    const double angle_per_photon = two_pi * lambda_hz * tau_s;
    if (n_bar == 0.0) return 1.0;  // only n = 0 contributes, phase 0

    const double r = n_bar / (1.0 + n_bar);
    double p = 1.0 / (1.0 + n_bar);  // P(0)
    KahanSum acc;
    for (long n = 0;; ++n) {
        acc.add(p * std::exp(-A * (1.0 - std::cos(angle_per_photon * double(n)))));
        p *= r;
        // Remaining tail mass is exactly p / (1 - r); each term is <= its mass.
        if (p / (1.0 - r) < 1e-16) break;
        if (n > 100'000'000)
            throw std::runtime_error("discrete_coherence_reference: no convergence");
    }
    return acc.s;
}

McEstimate mc_qubit_only_envelope(double chi_a_hz, double n_bar,
                                  double kappa_hz, double tau_s, long shots,
                                  RngSeed seed) {
    if (shots <= 0)
        throw std::domain_error("mc_qubit_only_envelope: shots must be > 0");
    if (n_bar < 0.0 || kappa_hz < 0.0 || !(tau_s >= 0.0))
        throw std::domain_error("mc_qubit_only_envelope: bad parameters");

    const double kappa_rad = two_pi * kappa_hz;
    const double angle_per_area = 2.0 * two_pi * chi_a_hz;  // phase / (n * dt)

    KahanSum sr, si, srr, sii;
    JumpTrajectory traj;
    long done = 0;
    for (std::uint64_t b = 0; done < shots; ++b) {
        long m = std::min<long>(kBlockShots, shots - done);
        SplitMix64 rng(block_seed(seed, b));
        KahanSum br, bi, brr, bii;
        for (long i = 0; i < m; ++i) {
            simulate_into(n_bar, kappa_rad, tau_s, rng, traj);
            double phase = angle_per_area * traj.integral(tau_s);
            double re = std::cos(phase);
            double im = -std::sin(phase);
            br.add(re);
            bi.add(im);
            brr.add(re * re);
            bii.add(im * im);
        }
        sr.add(br.s);
        si.add(bi.s);
        srr.add(brr.s);
        sii.add(bii.s);
        done += m;
    }

    double n = double(shots);
    McEstimate est;
    est.mean = {sr.s / n, si.s / n};
    est.std_error = {std::sqrt(sample_variance(sr.s, srr.s, n) / n),
                     std::sqrt(sample_variance(si.s, sii.s, n) / n)};
    est.shots = shots;
    return est;
}

std::vector<AutocorrelationPoint> trajectory_autocorrelation(
    double n_bar, double kappa_hz, double tau_s,
    const std::vector<double>& lags_s, long trajectories, RngSeed seed) {
    if (trajectories <= 0)
        throw std::domain_error("trajectory_autocorrelation: need trajectories");
    for (double lag : lags_s)
        if (!(lag >= 0.0))
            throw std::domain_error("trajectory_autocorrelation: negative lag");
    if (lags_s.empty()) return {};

    const double kappa_rad = two_pi * kappa_hz;
    const double t0 = tau_s / 2.0;
    const double t_end =
        t0 + *std::max_element(lags_s.begin(), lags_s.end());

    std::vector<KahanSum> sum(lags_s.size()), sum_sq(lags_s.size());
    JumpTrajectory traj;
    long done = 0;
    for (std::uint64_t b = 0; done < trajectories; ++b) {
        long m = std::min<long>(kBlockShots, trajectories - done);
        SplitMix64 rng(block_seed(seed, b));
        for (long i = 0; i < m; ++i) {
            simulate_into(n_bar, kappa_rad, t_end, rng, traj);
            double d0 = double(traj.value_at(t0)) - n_bar;
            for (std::size_t j = 0; j < lags_s.size(); ++j) {
                double dj = double(traj.value_at(t0 + lags_s[j])) - n_bar;
                sum[j].add(d0 * dj);
                sum_sq[j].add(d0 * dj * d0 * dj);
            }
        }
        done += m;
    }

    double n = double(trajectories);
    std::vector<AutocorrelationPoint> out(lags_s.size());
    for (std::size_t j = 0; j < lags_s.size(); ++j) {
        out[j].lag_s = lags_s[j];
        out[j].value = sum[j].s / n;
        out[j].std_error =
            std::sqrt(sample_variance(sum[j].s, sum_sq[j].s, n) / n);
        out[j].reference =
            n_bar * (1.0 + n_bar) * std::exp(-kappa_rad * lags_s[j]);
    }
    return out;
}

ChiSquaredResult stationarity_chisq(double n_bar, double kappa_hz,
                                    double tau_s, long trajectories,
                                    RngSeed seed) {
    if (n_bar <= 0.0)
        throw std::domain_error(
            "stationarity_chisq: needs n_bar > 0 (occupation spread)");
    if (trajectories <= 0)
        throw std::domain_error("stationarity_chisq: need trajectories");

    // Upper 0.1% points of chi-squared, dof 1..10.
    static constexpr double kCritical[10] = {10.828, 13.816, 16.266, 18.467,
                                             20.515, 22.458, 24.322, 26.124,
                                             27.877, 29.588};

    const double kappa_rad = two_pi * kappa_hz;
    const double t0 = tau_s / 2.0;
    const double n_traj = double(trajectories);
    const double r = n_bar / (1.0 + n_bar);

    // Bins 0..k_max plus one tail bin; choose k_max so each expected count is
    // >= 5, capped at 10 non-tail bins so the dof stays within the table.
    int k_max = -1;
    double p = 1.0 / (1.0 + n_bar);
    double tail = 1.0;
    while (k_max < 9) {
        // Adding bin k_max+1 requires both its own mass and the remaining
        // tail to keep expected counts >= 5.
        double next_tail = tail - p;
        if (n_traj * p < 5.0 || n_traj * next_tail < 5.0) break;
        ++k_max;
        tail = next_tail;
        p *= r;
    }
    if (k_max < 1)
        throw std::domain_error(
            "stationarity_chisq: too few trajectories for >= 2 proper bins");

    std::vector<long> counts(std::size_t(k_max) + 2, 0);
    JumpTrajectory traj;
    long done = 0;
    for (std::uint64_t b = 0; done < trajectories; ++b) {
        long m = std::min<long>(kBlockShots, trajectories - done);
        SplitMix64 rng(block_seed(seed, b));
        for (long i = 0; i < m; ++i) {
            simulate_into(n_bar, kappa_rad, tau_s, rng, traj);
            long n = traj.value_at(t0);
            counts[std::size_t(std::min<long>(n, k_max + 1))] += 1;
        }
        done += m;
    }

    double statistic = 0.0;
    p = 1.0 / (1.0 + n_bar);
    tail = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        double expected = n_traj * p;
        double diff = double(counts[std::size_t(k)]) - expected;
        statistic += diff * diff / expected;
        tail -= p;
        p *= r;
    }
    double expected_tail = n_traj * tail;
    double diff = double(counts[std::size_t(k_max) + 1]) - expected_tail;
    statistic += diff * diff / expected_tail;

    ChiSquaredResult res;
    res.statistic = statistic;
    res.dof = k_max + 1;  // bins - 1
    res.critical_p001 = kCritical[res.dof - 1];
    res.pass = statistic < res.critical_p001;
    return res;
}

}  // namespace thermoq
