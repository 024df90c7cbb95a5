// Acceptance gate: one check per release criterion, one PASS/FAIL line each,
// exit 0 only when every criterion holds.  Tolerances and ranges are stated
// inline next to each check.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sweep/commands.hpp"
#include "thermoq/coupler.hpp"
#include "thermoq/envelopes.hpp"
#include "thermoq/estimation.hpp"
#include "thermoq/physics.hpp"
#include "thermoq/stochastic.hpp"

using namespace thermoq;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& what,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx,
                what.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Golden-section maximum of fn over [lo, hi] in log coordinates.
double golden_max(const std::function<double(double)>& fn, double lo,
                  double hi) {
    const double gr = 0.6180339887498949;
    double a = std::log(lo), b = std::log(hi);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = fn(std::exp(c)), fd = fn(std::exp(d));
    for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CouplerCircuit design_circuit() {
    CouplerCircuit c;
    c.omega_a_hz = 5.09e9;
    c.omega_b_hz = 5.24e9;
    c.omega_1_hz = 4.82e9;
    c.omega_2_hz = 5.00e9;
    c.g_a1_hz = 1.35e7;
    c.g_b2_hz = 1.2e7;
    c.j_xy_hz = 9e6;
    return c;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    auto mode = ThermalModeSpec::from_temperature(1e9, 0.0, 1e-2);
    ProtocolParams proto;
    proto.lambda_hz = 5e4;
    proto.alpha = 2.0;
    proto.nu = 10000;
    proto.tau_s = 1e-6;
    OptimalTau ot =
        optimal_tau(Strategy::coherence_mediated, mode, proto, 1e-6, 1e-3);
    proto.tau_s = ot.tau_s;
    double dT = qfi_coherence(mode, proto).sensitivity;
    double el = seconds_since(t0);
    bool pass = dT >= 4e-5 && dT <= 8e-5 && ot.tau_s >= 3e-6 &&
                ot.tau_s <= 3e-5 && el < 1.0;
    report(1, pass,
           "coherence strategy optimum at 10 mK lands in the design window",
           fmt("deltaT_min = %.4g K in [40,80] uK, tau_opt = %.4g s in "
               "[3,30] us, %.2f s < 1 s",
               dT, ot.tau_s, el));
}

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    const double j = 3e7, d12 = 1.8e8;
    const double d3 = d12 * d12 * d12;
    double worst = 0.0;
    for (double level : {1e4, 2e4, 3e4, 4e4, 5e4}) {
        double product = level * d3 / (8.0 * j * j);
        for (int i = 0; i < 5; ++i) {
            double chi_a = 1e6 * std::pow(10.0, i / 4.0);
            double chi_b = product / chi_a;
            double rel =
                std::abs(lambda_perturbative(chi_a, chi_b, j, d12) - level) /
                level;
            worst = std::max(worst, rel);
        }
    }
    double el = seconds_since(t0);
    bool pass = worst <= 1e-3 && el < 1.0;
    report(2, pass,
           "target cross-Kerr levels reproduced on the design loci",
           fmt("max relative error %.3g <= 1e-3 over 10..50 kHz, %.2f s < 1 s",
               worst, el));
}

void criterion_3() {
    bool tau_sq = true;
    for (double T : {2e-3, 1e-2, 0.1}) {
        auto m = ThermalModeSpec::from_temperature(1e9, 0.0, T);
        tau_sq = tau_sq &&
                 (qfi_phase(m, 5e4, 2e-5).qfi == 4.0 * qfi_phase(m, 5e4, 1e-5).qfi);
    }

    double T50 = 50.0 * hbar * two_pi * 1e9 / k_B;
    auto hot = ThermalModeSpec::from_temperature(1e9, 0.0, T50);
    double sat =
        std::pow(two_pi * 5e4 * 1e-5 * k_B / (hbar * two_pi * 1e9), 2);
    double sat_ratio = qfi_phase(hot, 5e4, 1e-5).qfi / sat;

    std::vector<double> inv_t, y;
    for (int i = 0; i < 20; ++i) {
        double T = 2e-3 * std::pow(2.5, i / 19.0);  // [2, 5] mK
        auto m = ThermalModeSpec::from_temperature(1e9, 0.0, T);
        inv_t.push_back(1.0 / T);
        y.push_back(std::log(qfi_phase(m, 5e4, 1e-5).qfi * T * T * T * T));
    }
    double slope = fit_slope(inv_t, y);
    double target = -2.0 * hbar * two_pi * 1e9 / k_B;
    double slope_rel = std::abs(slope - target) / std::abs(target);

    bool pass = tau_sq && std::abs(sat_ratio - 1.0) <= 0.05 &&
                slope_rel <= 0.05;
    report(3, pass,
           "phase-strategy QFI: exact tau^2 scaling, high-T saturation, "
           "low-T exponential slope",
           fmt("tau^2 doubling exact: %s; saturation ratio %.6f within 5%%; "
               "slope of ln(F T^4) vs 1/T = %.6g vs -2 hbar w/kB = %.6g "
               "(rel %.3g <= 0.05)",
               tau_sq ? "yes" : "no", sat_ratio, slope, target, slope_rel));
}

void criterion_4() {
    auto mode = ThermalModeSpec::from_temperature(1e9, 1e3, 1e-2);
    ProtocolParams proto;
    proto.chi_a_hz = 2e4;
    OptimalTau ot = optimal_tau(Strategy::qubit_only, mode, proto, 1e-6, 1e-3);
    bool window = ot.tau_s >= 3e-5 && ot.tau_s <= 7e-5 && !ot.at_lower_edge &&
                  !ot.at_upper_edge;

    // Quasi-static cross-check: the phase term's optimum solves
    // d/dtau [tau^2 e^{-2 a tau^2}] = 0 at 1/sqrt(2a), a = (2 chi)^2 V / 2.
    double chi_ang = two_pi * 2e4;
    double a = 0.5 * std::pow(2.0 * chi_ang, 2) *
               thermal_variance(occupancy(1e9, 1e-2));
    double analytic = 1.0 / std::sqrt(2.0 * a);
    double golden = golden_max(
        [&](double t) { return t * t * std::exp(-2.0 * a * t * t); }, 1e-6,
        1e-3);
    double qs_rel = std::abs(golden - analytic) / analytic;

    // Fast cavity: the filter caps the accrued variance and the QFI becomes
    // monotone in tau -- no interior optimum on [1 us, 1 ms].
    auto fast = ThermalModeSpec::from_temperature(1e9, 1e6, 1e-2);
    bool monotone = true;
    double prev = -1.0;
    for (int i = 0; i < 60; ++i) {
        double tau = 1e-6 * std::pow(1e3, i / 59.0);
        double f = qfi_qubit_only(fast, 2e4, tau).qfi;
        monotone = monotone && f >= prev;
        prev = f;
    }

    bool pass = window && qs_rel <= 0.02 && monotone;
    report(4, pass,
           "qubit-only optimum: interior maximum in the design window, "
           "quasi-static cross-check, Markovian monotony",
           fmt("tau_opt = %.4g s in [30,70] us; golden vs 1/sqrt(2a): "
               "%.4g vs %.4g s (rel %.3g <= 0.02); F monotone at "
               "kappa = 1 MHz: %s",
               ot.tau_s, golden, analytic, qs_rel, monotone ? "yes" : "no"));
}

void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    CouplerCircuit base = design_circuit();
    double rels[3];
    bool converged = true;
    int n_max_used = 0;
    int k = 0;
    for (double s : {1.0, 0.5, 0.25}) {
        CouplerCircuit c = base.scaled_couplings(s);
        double lp = lambda_perturbative(
            chi_from_g(c.g_a1_hz, c.delta_a1_hz()),
            chi_from_g(c.g_b2_hz, c.delta_b2_hz()), c.j_xy_hz, c.delta_12_hz());
        LambdaExactResult ex = lambda_exact(c);
        rels[k++] = std::abs(ex.lambda_hz - lp) / std::abs(lp);
        converged = converged && ex.converged;
        n_max_used = std::max(n_max_used, ex.n_max_used);
    }
    double el = seconds_since(t0);
    bool pass = converged && rels[0] <= 0.25 && rels[1] < rels[0] &&
                rels[2] < rels[1] && n_max_used <= 4 && el < 10.0;
    report(5, pass,
           "exact diagonalization validates the perturbative cross-Kerr "
           "with shrinking error",
           fmt("rel errors %.4g > %.4g > %.4g (first <= 0.25), n_max <= %d, "
               "%.2f s < 10 s",
               rels[0], rels[1], rels[2], n_max_used, el));
}

void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = 42424242ULL;
    int bad = 0;
    double worst_ns = 0.0;

    // (a) Gaussian-phase Monte Carlo vs the exact average, 5x5 grid.
    std::uint64_t stream = 1000;
    for (double alpha : {0.5, 1.0, 1.5, 2.0, 2.5})
        for (double s2 : {0.1, 0.5, 1.0, 2.0, 4.0}) {
            double lambda_hz = std::sqrt(s2 / 2.0) / two_pi;
            auto est = mc_coherence_envelope(alpha, lambda_hz, 1.0, 1.0,
                                             100000, {seed, stream++},
                                             PhaseStatistics::gaussian);
            double ref = coherence_envelope_exact(
                alpha, phase_variance(lambda_hz, 1.0, 1.0));
            double ns = std::abs(est.mean.real() - ref) /
                        est.std_error.real();
            worst_ns = std::max(worst_ns, ns);
            if (ns > 3.0) ++bad;
        }

    // (b) Trajectory-sampled qubit envelope vs the closed form in both
    // filter corners (Gamma <= 0.7 throughout).
    struct QubitPoint {
        double chi_hz, kappa_hz, tau_s;
        long shots;
        std::uint64_t stream;
    };
    const QubitPoint qpts[] = {
        {27390.692229025935, 1e3, 1.5915494309189535e-7, 100000, 2000},
        {5000.0, 1e6, 7.9577471545947675e-5, 25000, 2001},
    };
    for (const auto& q : qpts) {
        auto est = mc_qubit_only_envelope(q.chi_hz, 1.0, q.kappa_hz, q.tau_s,
                                          q.shots, {seed, q.stream});
        auto ref = qubit_only_envelope(q.chi_hz, 1.0, q.kappa_hz, q.tau_s);
        double ns_re =
            std::abs(est.mean.real() - ref.amplitude * std::cos(ref.phase)) /
            est.std_error.real();
        double ns_im =
            std::abs(est.mean.imag() + ref.amplitude * std::sin(ref.phase)) /
            est.std_error.imag();
        worst_ns = std::max({worst_ns, ns_re, ns_im});
        if (ns_re > 3.0) ++bad;
        if (ns_im > 3.0) ++bad;
    }

    // (c) Stationary autocorrelation vs n(n+1) e^{-kappa lag} at three lags.
    const double inv_k = 1.0 / (two_pi * 1e3);
    auto acf = trajectory_autocorrelation(
        1.0, 1e3, 1e-3, {0.5 * inv_k, inv_k, 2.0 * inv_k}, 20000,
        {seed, 3000});
    for (const auto& p : acf) {
        double ns = std::abs(p.value - p.reference) / p.std_error;
        worst_ns = std::max(worst_ns, ns);
        if (ns > 3.0) ++bad;
    }

    double el = seconds_since(t0);
    bool pass = bad == 0 && el < 60.0;
    report(6, pass,
           "Monte Carlo oracles agree with the closed forms at 3 sigma",
           fmt("31 checks (25 Gaussian grid + 4 qubit components + 3 ACF "
               "lags), %d outside 3 sigma, worst %.2f sigma, %.1f s < 60 s",
               bad, worst_ns, el));
}

void criterion_7() {
    const double omega = 1e9, kappa = 1e3, lambda = 5e4, alpha = 2.0,
                 chi_a = 2e4;
    double worst = 0.0;
    long included = 0;
    for (Strategy strat : {Strategy::coherence_mediated, Strategy::phase_shift,
                           Strategy::qubit_only}) {
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                double T = 5e-3 * std::pow(100.0, i / 19.0);   // [5 mK, 0.5 K]
                double tau = 1e-6 * std::pow(1000.0, j / 19.0);  // [1 us, 1 ms]
                auto mode = ThermalModeSpec::from_temperature(omega, kappa, T);
                ProtocolParams proto;
                proto.lambda_hz = lambda;
                proto.tau_s = tau;
                proto.alpha = alpha;
                proto.chi_a_hz = chi_a;
                CoherencePoint cp =
                    strategy_coherence(strat, omega, kappa, T, proto);
                if (strat != Strategy::phase_shift && cp.amplitude >= 0.999)
                    continue;
                double analytic = 0.0;
                switch (strat) {
                    case Strategy::coherence_mediated:
                        analytic = qfi_coherence(mode, proto).qfi;
                        break;
                    case Strategy::phase_shift:
                        analytic = qfi_phase(mode, lambda, tau).qfi;
                        break;
                    case Strategy::qubit_only:
                        analytic = qfi_qubit_only(mode, chi_a, tau).qfi;
                        break;
                }
                // Below ~1e-300 squared stencil differences go subnormal and
                // cannot support a 1e-3 relative comparison.
                if (analytic < 1e-300) continue;
                // Ill-posed stencils are excluded: where the closed form sits
                // on its e^{-2 alpha^2} saturation floor, the temperature
                // dependence falls below one ulp and a central difference
                // measures nothing but rounding noise.
                CoherencePoint pl = strategy_coherence(strat, omega, kappa,
                                                       T * (1.0 - 1e-5), proto);
                CoherencePoint ph = strategy_coherence(strat, omega, kappa,
                                                       T * (1.0 + 1e-5), proto);
                auto quanta = [](double delta, double at) {
                    double u =
                        std::nextafter(std::abs(at),
                                       std::numeric_limits<double>::infinity()) -
                        std::abs(at);
                    return std::abs(delta) / u;
                };
                if (quanta(ph.amplitude - pl.amplitude, cp.amplitude) < 1e4 &&
                    quanta(ph.phase - pl.phase, cp.phase) < 1e4)
                    continue;
                double fd = finite_difference_qfi(strat, mode, proto, 1e-5);
                worst = std::max(worst, std::abs(analytic - fd) / analytic);
                ++included;
            }
    }
    bool pass = worst <= 1e-3 && included > 600;
    report(7, pass,
           "finite-difference QFI confirms the analytic QFI on the "
           "(T, tau) grid for all strategies",
           fmt("max relative deviation %.3g <= 1e-3 over %ld points "
               "(visibility and sub-ulp stencil filters)",
               worst, included));
}

void criterion_8() {
    fs::path dir = fs::temp_directory_path() / "thermoq_accept_validate";
    fs::remove_all(dir);
    thermoq::sweep::RunContext ctx;
    ctx.out_dir = dir;
    int rc = thermoq::sweep::run_command("validate", ctx, "");

    double ratio = 0.0, sat = 0.0, sat_expected = 0.0;
    bool found_ratio = false, found_sat = false;
    if (fs::exists(dir / "validate_report.json")) {
        auto j = nlohmann::json::parse(slurp(dir / "validate_report.json"));
        for (const auto& c : j["checks"]) {
            if (c["name"] == "weak_dephasing_rate_ratio") {
                ratio = c["value"].get<double>();
                found_ratio = true;
            }
            if (c["name"] == "saturation_ratio") {
                sat = c["value"].get<double>();
                sat_expected = c["expected"].get<double>();
                found_sat = true;
            }
        }
    }
    double i0 = 427.56411572180479;  // I_0(8), the saturated-gap factor
    bool pass = rc == 0 && found_ratio && found_sat && ratio >= 1.8 &&
                ratio <= 2.2 && std::abs(sat - i0) / i0 <= 1e-6 &&
                std::abs(sat_expected - i0) / i0 <= 1e-6;
    report(8, pass,
           "validation report quantifies the closed-vs-exact envelope gap",
           fmt("exit %d; initial-rate ratio %.6f in [1.8, 2.2]; saturation "
               "ratio %.10g vs I0(8) = %.10g (rel %.2g <= 1e-6)",
               rc, ratio, sat, i0, std::abs(sat - i0) / i0));
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(THERMOQ_BIN) + " " + args;
    int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

void criterion_9() {
    const char* commands[] = {"qfi-coherence", "qfi-phase", "qfi-qubit",
                              "coupler-map", "coupler-validate", "visibility",
                              "compare", "mc-validate", "validate"};
    fs::path root = fs::temp_directory_path() / "thermoq_accept_c9";
    fs::remove_all(root);
    bool pass = true;
    std::string detail;
    int files_compared = 0;
    for (const char* cmd : commands) {
        fs::path d1 = root / (std::string(cmd) + "_w1");
        fs::path d4 = root / (std::string(cmd) + "_w4");
        fs::create_directories(d1);
        fs::create_directories(d4);
        int r1 = run_cli(std::string(cmd) + " --seed 42424242 --workers 1" +
                         " --out " + d1.string() + " > /dev/null 2>&1");
        int r4 = run_cli(std::string(cmd) + " --seed 42424242 --workers 4" +
                         " --out " + d4.string() + " > /dev/null 2>&1");
        if (r1 != 0 || r4 != 0) {
            pass = false;
            detail += fmt("%s exits %d/%d; ", cmd, r1, r4);
            continue;
        }
        int here = 0;
        for (const auto& e : fs::directory_iterator(d1)) {
            std::string name = e.path().filename().string();
            if (name.size() > 14 &&
                name.compare(name.size() - 14, 14, "_manifest.json") == 0)
                continue;  // manifests carry timestamps and worker counts
            if (!fs::exists(d4 / name) || slurp(e.path()) != slurp(d4 / name)) {
                pass = false;
                detail += fmt("%s differs on %s; ", cmd, name.c_str());
            }
            ++here;
        }
        if (here == 0) {
            pass = false;
            detail += fmt("%s produced no outputs; ", cmd);
        }
        files_compared += here;
    }
    if (pass) detail = fmt("%d output files byte-identical", files_compared);
    report(9, pass,
           "fixed seed gives byte-identical outputs for 1 and 4 workers on "
           "every command",
           detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0) {
        std::printf("acceptance: all 9 criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
