#include "sweep/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "sweep/csv.hpp"
#include "sweep/manifest.hpp"
#include "sweep/pool.hpp"
#include "thermoq/coupler.hpp"
#include "thermoq/envelopes.hpp"
#include "thermoq/estimation.hpp"
#include "thermoq/physics.hpp"
#include "thermoq/stochastic.hpp"

namespace thermoq::sweep {

namespace {

std::filesystem::path ensure_out_dir(const RunContext& ctx) {
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (!std::filesystem::is_directory(ctx.out_dir))
        throw IoError("cannot create output directory '" +
                      ctx.out_dir.string() + "'");
    return ctx.out_dir;
}

std::string stem_for(const SweepConfig& config, const char* fallback) {
    std::string base = config.output.empty() ? fallback : config.output;
    for (const char* ext : {".csv", ".json"}) {
        std::size_t n = std::string(ext).size();
        if (base.size() > n && base.compare(base.size() - n, n, ext) == 0)
            return base.substr(0, base.size() - n);
    }
    return base;
}

void check_axes(const SweepConfig& config,
                std::initializer_list<const char*> allowed) {
    for (const auto& a : config.axes) {
        bool known = false;
        for (const char* name : allowed)
            if (a.name == name) known = true;
        if (!known)
            throw ConfigError("axis '" + a.name +
                              "' is not swept by this command");
    }
}

// Values for one parameter: the axis grid when declared, else the fixed
// scalar (which must then be present).
std::vector<double> values_for(const SweepConfig& config,
                               const std::string& name, const char* unit) {
    if (const SweepAxis* a = config.axis(name)) {
        if (a->unit != unit)
            throw ConfigError("axis '" + name + "' must use unit " + unit);
        return a->grid();
    }
    return {config.require(name)};
}

RunManifest start_manifest(const std::string& command,
                           const SweepConfig& config, const RunContext& ctx) {
    RunManifest m;
    m.command = command;
    m.config_text = serialize_config(config);
    m.master_seed = config.master_seed;
    m.shots = config.shots;
    m.workers = ctx.workers;
    m.started_utc = utc_now();
    return m;
}

void finish_manifest(RunManifest& m, const std::filesystem::path& dir,
                     const std::string& stem) {
    m.finished_utc = utc_now();
    write_manifest(m, dir / (stem + "_manifest.json"));
}

void add_output(RunManifest& m, const CsvWriter& csv) {
    m.outputs.emplace_back(csv.filename(), checksum_string(csv.checksum()));
}

long as_count(const SweepConfig& config, const char* name, double fallback) {
    double v = config.get(name, fallback);
    if (v < 1.0 || v != std::floor(v) || v > 9e18)
        throw ConfigError(std::string("'") + name +
                          "' must be a positive integer");
    return (long)v;
}

}  // namespace

int cmd_fig_coherence_qfi(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {"temperature", "tau"});
    const double omega = config.require("omega_a");
    const double kappa = config.get("kappa_a", 0.0);
    const double lambda = config.require("lambda");
    const double alpha = config.require("alpha");
    const long nu = as_count(config, "nu", 1.0);
    const auto temps = values_for(config, "temperature", "K");
    const auto taus = values_for(config, "tau", "s");

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "qfi_coherence");
    RunManifest manifest = start_manifest("qfi-coherence", config, ctx);

    const long n_t = (long)temps.size(), n_tau = (long)taus.size();
    std::vector<std::array<double, 5>> rows(std::size_t(n_t * n_tau));
    parallel_for(n_t * n_tau, ctx.workers, [&](long f) {
        double T = temps[std::size_t(f / n_tau)];
        double tau = taus[std::size_t(f % n_tau)];
        auto mode = ThermalModeSpec::from_temperature(omega, kappa, T);
        ProtocolParams proto;
        proto.lambda_hz = lambda;
        proto.tau_s = tau;
        proto.alpha = alpha;
        proto.nu = nu;
        QfiResult r = qfi_coherence(mode, proto);
        CoherencePoint cp = strategy_coherence(Strategy::coherence_mediated,
                                               omega, kappa, T, proto);
        rows[std::size_t(f)] = {T, tau, r.qfi, cp.amplitude, r.sensitivity};
    });

    CsvWriter csv(dir / (stem + ".csv"),
                  {"T_K", "tau_s", "qfi_per_K2", "C", "deltaT_K"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);

    // Per-temperature optimum over the tau bracket (the tau axis range, or
    // two decades around the fixed tau).
    double lo = taus.front(), hi = taus.back();
    if (taus.size() == 1) {
        lo = taus[0] * 1e-2;
        hi = taus[0] * 1e2;
    }
    std::vector<std::array<double, 3>> opt(static_cast<std::size_t>(n_t));
    parallel_for(n_t, ctx.workers, [&](long i) {
        auto mode = ThermalModeSpec::from_temperature(omega, kappa,
                                                      temps[std::size_t(i)]);
        ProtocolParams proto;
        proto.lambda_hz = lambda;
        proto.tau_s = lo;
        proto.alpha = alpha;
        proto.nu = nu;
        OptimalTau ot = optimal_tau(Strategy::coherence_mediated, mode, proto,
                                    lo, hi);
        proto.tau_s = ot.tau_s;
        QfiResult r = qfi_coherence(mode, proto);
        opt[std::size_t(i)] = {temps[std::size_t(i)], ot.tau_s, r.sensitivity};
    });
    CsvWriter oc(dir / (stem + "_optimal_tau.csv"),
                 {"T_K", "tau_opt_s", "deltaT_min_K"});
    for (const auto& r : opt)
        oc.row(std::vector<double>(r.begin(), r.end()));
    oc.close();
    add_output(manifest, oc);

    finish_manifest(manifest, dir, stem);
    return 0;
}

int cmd_fig_phase_qfi(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {"temperature", "tau"});
    const double omega = config.require("omega_a");
    const double kappa = config.get("kappa_a", 0.0);
    const double lambda = config.require("lambda");
    const long nu = as_count(config, "nu", 1.0);
    const auto temps = values_for(config, "temperature", "K");
    const auto taus = values_for(config, "tau", "s");

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "qfi_phase");
    RunManifest manifest = start_manifest("qfi-phase", config, ctx);

    const long n_t = (long)temps.size(), n_tau = (long)taus.size();
    std::vector<std::array<double, 4>> rows(std::size_t(n_t * n_tau));
    parallel_for(n_t * n_tau, ctx.workers, [&](long f) {
        double T = temps[std::size_t(f / n_tau)];
        double tau = taus[std::size_t(f % n_tau)];
        auto mode = ThermalModeSpec::from_temperature(omega, kappa, T);
        QfiResult r = qfi_phase(mode, lambda, tau, nu);
        rows[std::size_t(f)] = {T, tau, r.qfi, r.sensitivity};
    });

    CsvWriter csv(dir / (stem + ".csv"),
                  {"T_K", "tau_s", "qfi_per_K2", "deltaT_K"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);
    finish_manifest(manifest, dir, stem);
    return 0;
}

int cmd_qubit_qfi(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {"temperature", "tau"});
    const double omega = config.require("omega_a");
    const double kappa = config.require("kappa_a");
    const double chi_a = config.require("chi_a");
    const long nu = as_count(config, "nu", 1.0);
    const auto temps = values_for(config, "temperature", "K");
    const auto taus = values_for(config, "tau", "s");

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "qfi_qubit");
    RunManifest manifest = start_manifest("qfi-qubit", config, ctx);

    const long n_t = (long)temps.size(), n_tau = (long)taus.size();
    std::vector<std::array<double, 4>> rows(std::size_t(n_t * n_tau));
    parallel_for(n_t * n_tau, ctx.workers, [&](long f) {
        double T = temps[std::size_t(f / n_tau)];
        double tau = taus[std::size_t(f % n_tau)];
        auto mode = ThermalModeSpec::from_temperature(omega, kappa, T);
        QfiResult r = qfi_qubit_only(mode, chi_a, tau, nu);
        rows[std::size_t(f)] = {T, tau, r.qfi, r.sensitivity};
    });

    CsvWriter csv(dir / (stem + ".csv"),
                  {"T_K", "tau_s", "qfi_per_K2", "deltaT_K"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);
    finish_manifest(manifest, dir, stem);
    return 0;
}

int cmd_coupler_map(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {"chi_a1", "chi_b2"});
    const double j_xy = config.require("j_xy");
    const double delta_12 = config.require("delta_12");
    const auto chis_a = values_for(config, "chi_a1", "Hz");
    const auto chis_b = values_for(config, "chi_b2", "Hz");

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "coupler_map");
    RunManifest manifest = start_manifest("coupler-map", config, ctx);
    manifest.notes["lambda_sign"] =
        "lambda carries sign(chi_a1*chi_b2); the map takes chi magnitudes, "
        "so positive inputs give positive lambda";
    manifest.notes["contour_relation"] =
        "chi_a1*chi_b2 = lambda*delta_12^3/(8*j_xy^2) at fixed j_xy, delta_12";

    const long n_a = (long)chis_a.size(), n_b = (long)chis_b.size();
    std::vector<std::array<double, 3>> rows(std::size_t(n_a * n_b));
    parallel_for(n_a * n_b, ctx.workers, [&](long f) {
        double ca = chis_a[std::size_t(f / n_b)];
        double cb = chis_b[std::size_t(f % n_b)];
        rows[std::size_t(f)] = {ca, cb,
                                lambda_perturbative(ca, cb, j_xy, delta_12)};
    });

    CsvWriter csv(dir / (stem + ".csv"), {"chi_a1_Hz", "chi_b2_Hz", "lambda_Hz"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);

    // Fixed-level contour crossings: for each level, the chi_b2 that puts a
    // grid chi_a1 column exactly on the level.
    const double levels[] = {1e4, 2e4, 3e4, 4e4, 5e4};
    CsvWriter contours(dir / (stem + "_contours.csv"),
                       {"level_Hz", "chi_a1_Hz", "chi_b2_Hz", "lambda_Hz"});
    const double d3 = delta_12 * delta_12 * delta_12;
    const double b_lo = std::min(chis_b.front(), chis_b.back());
    const double b_hi = std::max(chis_b.front(), chis_b.back());
    for (double level : levels) {
        double product = level * d3 / (8.0 * j_xy * j_xy);
        for (double ca : chis_a) {
            if (ca == 0.0) continue;
            double cb = product / ca;
            if (cb < b_lo || cb > b_hi) continue;
            contours.row({level, ca, cb,
                          lambda_perturbative(ca, cb, j_xy, delta_12)});
        }
    }
    contours.close();
    add_output(manifest, contours);

    finish_manifest(manifest, dir, stem);
    return 0;
}

int cmd_coupler_validate(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {});
    CouplerCircuit base;
    base.omega_a_hz = config.require("omega_a");
    base.omega_b_hz = config.require("omega_b");
    base.omega_1_hz = config.require("omega_1");
    base.omega_2_hz = config.require("omega_2");
    base.g_a1_hz = config.require("g_a1");
    base.g_b2_hz = config.require("g_b2");
    base.j_xy_hz = config.require("j_xy");
    FockTruncation trunc;
    trunc.n_max = (int)as_count(config, "n_max", 3.0);

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "coupler_validate");
    RunManifest manifest = start_manifest("coupler-validate", config, ctx);
    manifest.notes["assignment"] =
        "dressed levels matched to bare labels by maximum overlap within each "
        "conserved-excitation block";

    const double scales[] = {1.0, 0.5, 0.25};
    std::vector<std::array<double, 7>> rows;
    std::vector<double> rel_errors;
    for (double s : scales) {
        CouplerCircuit c = base.scaled_couplings(s);
        double chi_a1 = chi_from_g(c.g_a1_hz, c.delta_a1_hz());
        double chi_b2 = chi_from_g(c.g_b2_hz, c.delta_b2_hz());
        double lp = lambda_perturbative(chi_a1, chi_b2, c.j_xy_hz,
                                        c.delta_12_hz());
        LambdaExactResult ex = lambda_exact(c, trunc);
        double rel = std::abs(ex.lambda_hz - lp) / std::abs(lp);
        double min_ov = 1.0;
        bool ambiguous = false;
        for (const auto& a : ex.assignments) {
            min_ov = std::min(min_ov, a.overlap_sq);
            ambiguous = ambiguous || a.ambiguous;
        }
        if (!ex.converged)
            throw NumericalError(
                "coupler-validate: exact diagonalization did not converge at "
                "scale " + format_full(s));
        if (ambiguous)
            throw NumericalError(
                "coupler-validate: ambiguous dressed-state assignment at "
                "scale " + format_full(s));
        rows.push_back({s, lp, ex.lambda_hz, rel, min_ov,
                        double(ex.n_max_used), ex.converged ? 1.0 : 0.0});
        rel_errors.push_back(rel);
    }

    CsvWriter csv(dir / (stem + ".csv"),
                  {"scale", "lambda_pert_Hz", "lambda_exact_Hz", "rel_error",
                   "min_overlap_sq", "n_max_used", "converged"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);
    finish_manifest(manifest, dir, stem);

    for (std::size_t i = 1; i < rel_errors.size(); ++i)
        if (!(rel_errors[i] < rel_errors[i - 1]))
            throw NumericalError(
                "coupler-validate: perturbative error must shrink as the "
                "couplings scale down (got " + format_full(rel_errors[i - 1]) +
                " -> " + format_full(rel_errors[i]) + ")");
    return 0;
}

int cmd_visibility(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {"tau_R", "chi"});
    const double n_bar_b = config.require("n_bar_b");
    const double alpha = config.get("alpha", 0.0);
    const double kappa_m = config.get("kappa_m", 0.0);
    const auto taus = values_for(config, "tau_R", "s");
    const auto chis = values_for(config, "chi", "Hz");

    const double var_disp = displaced_thermal_variance(n_bar_b, alpha);
    const double var_th = thermal_variance(n_bar_b);

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "visibility");
    RunManifest manifest = start_manifest("visibility", config, ctx);
    manifest.notes["families"] =
        "vis_displaced uses the displaced-thermal photon variance (probe-side "
        "coupling), vis_thermal the bare thermal variance (bath-side coupling)";

    const long n_tau = (long)taus.size(), n_chi = (long)chis.size();
    std::vector<std::array<double, 4>> rows(std::size_t(n_tau * n_chi));
    parallel_for(n_tau * n_chi, ctx.workers, [&](long f) {
        double tau = taus[std::size_t(f / n_chi)];
        double chi = chis[std::size_t(f % n_chi)];
        rows[std::size_t(f)] = {tau, chi,
                                parasitic_envelope(chi, var_disp, kappa_m, tau),
                                parasitic_envelope(chi, var_th, kappa_m, tau)};
    });

    CsvWriter csv(dir / (stem + ".csv"),
                  {"tau_R_s", "chi_Hz", "vis_displaced", "vis_thermal"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);
    finish_manifest(manifest, dir, stem);

    // Hard invariants: decay in tau_R at fixed chi, and (for the ascending
    // grid) stronger coupling never gives higher visibility at fixed tau_R.
    for (long j = 0; j < n_chi; ++j)
        for (long i = 1; i < n_tau; ++i)
            for (int col : {2, 3})
                if (rows[std::size_t(i * n_chi + j)][std::size_t(col)] >
                    rows[std::size_t((i - 1) * n_chi + j)][std::size_t(col)] +
                        1e-15)
                    throw NumericalError(
                        "visibility must be nonincreasing in tau_R");
    for (long i = 0; i < n_tau; ++i)
        for (long j = 1; j < n_chi; ++j)
            for (int col : {2, 3})
                if (rows[std::size_t(i * n_chi + j)][std::size_t(col)] >
                    rows[std::size_t(i * n_chi + j - 1)][std::size_t(col)] +
                        1e-15)
                    throw NumericalError(
                        "visibility must be nonincreasing in chi");
    return 0;
}

int cmd_compare(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {"tau"});
    const double T = config.require("temperature");
    const double omega = config.require("omega_a");
    const double kappa = config.get("kappa_a", 0.0);
    const double lambda = config.require("lambda");
    const double alpha = config.require("alpha");
    const double chi_a = config.require("chi_a");
    const long nu = as_count(config, "nu", 1.0);
    const double tau_oh = config.get("tau_oh", 0.0);
    const auto taus = values_for(config, "tau", "s");

    auto mode = ThermalModeSpec::from_temperature(omega, kappa, T);

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "compare");
    RunManifest manifest = start_manifest("compare", config, ctx);

    const long n_tau = (long)taus.size();
    std::vector<std::array<double, 10>> rows(static_cast<std::size_t>(n_tau));
    parallel_for(n_tau, ctx.workers, [&](long i) {
        double tau = taus[std::size_t(i)];
        ProtocolParams proto;
        proto.lambda_hz = lambda;
        proto.tau_s = tau;
        proto.alpha = alpha;
        proto.nu = nu;
        proto.chi_a_hz = chi_a;
        double fc = qfi_coherence(mode, proto).qfi;
        double fp = qfi_phase(mode, lambda, tau, nu).qfi;
        double fq = qfi_qubit_only(mode, chi_a, tau, nu).qfi;
        double vc = strategy_coherence(Strategy::coherence_mediated, omega,
                                       kappa, T, proto)
                        .amplitude;
        double vq = qubit_only_envelope(chi_a, mode.n_bar, kappa, tau).amplitude;
        double denom = tau + tau_oh;
        if (denom <= 0.0)
            throw NumericalError("compare: tau + tau_oh must be positive");
        rows[std::size_t(i)] = {tau, fc, fp, fq, vc, 1.0, vq,
                                fc / denom, fp / denom, fq / denom};
    });

    CsvWriter csv(dir / (stem + ".csv"),
                  {"tau_s", "qfi_coherence", "qfi_phase", "qfi_qubit",
                   "vis_coherence", "vis_phase", "vis_qubit",
                   "rate_coherence", "rate_phase", "rate_qubit"});
    for (const auto& r : rows)
        csv.row(std::vector<double>(r.begin(), r.end()));
    csv.close();
    add_output(manifest, csv);
    finish_manifest(manifest, dir, stem);
    return 0;
}

namespace {

struct McCheck {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double std_error = 0.0;
    double n_sigma = 0.0;
    bool pass = false;
};

McCheck three_sigma(const std::string& name, double value, double reference,
                    double std_error) {
    McCheck c;
    c.name = name;
    c.value = value;
    c.reference = reference;
    c.std_error = std_error;
    c.n_sigma = std_error > 0.0 ? std::abs(value - reference) / std_error
                                : (value == reference ? 0.0 : INFINITY);
    c.pass = c.n_sigma <= 3.0;
    return c;
}

}  // namespace

int cmd_mc_validate(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {});
    const long shots = config.shots;
    const long trajectories = as_count(config, "trajectories", 20000.0);
    const std::uint64_t seed = config.master_seed;

    std::vector<McCheck> checks;

    // Gaussian-phase sampled envelope against the exact Gaussian average.
    {
        const double alphas[] = {0.5, 1.0, 2.0};
        const double sigma_sqs[] = {0.1, 1.0, 4.0};
        std::uint64_t stream = 100;
        for (double alpha : alphas)
            for (double s2 : sigma_sqs) {
                // sigma^2 = (2 pi lambda tau)^2 n(n+1); tau = 1 s, n = 1.
                double lambda_hz = std::sqrt(s2 / 2.0) / two_pi;
                double achieved = phase_variance(lambda_hz, 1.0, 1.0);
                McEstimate mc = mc_coherence_envelope(
                    alpha, lambda_hz, 1.0, 1.0, shots, {seed, stream++},
                    PhaseStatistics::gaussian);
                char name[64];
                std::snprintf(name, sizeof name, "gaussian_a%g_s%g", alpha, s2);
                checks.push_back(three_sigma(
                    name, mc.mean.real(),
                    coherence_envelope_exact(alpha, achieved),
                    mc.std_error.real()));
            }
    }

    // Discrete Bose-Einstein sampling against the exact geometric sum
    // (independent of any Gaussian model).
    {
        McEstimate mc =
            mc_coherence_envelope(2.0, 5e4, 1e-5, 1.0, shots, {seed, 200},
                                  PhaseStatistics::discrete_thermal);
        checks.push_back(three_sigma(
            "discrete_alias", mc.mean.real(),
            discrete_coherence_reference(2.0, 5e4, 1e-5, 1.0),
            mc.std_error.real()));
    }

    // Trajectory-sampled qubit envelope against the dephasing closed form,
    // in the quasi-static and Markovian corners.  Shot counts are pinned:
    // they were chosen so the closed form's own O(Gamma^2) truncation bias
    // stays well inside the 3-sigma band.
    {
        struct Point {
            const char* tag;
            double chi_hz, kappa_hz, tau_s;
            long shots;
        };
        const Point points[] = {
            {"qs", 27390.692229025935, 1e3, 1.5915494309189535e-7, 100000},
            {"markov", 5000.0, 1e6, 7.9577471545947675e-5, 25000},
        };
        std::uint64_t stream = 300;
        for (const Point& p : points) {
            McEstimate mc = mc_qubit_only_envelope(p.chi_hz, 1.0, p.kappa_hz,
                                                   p.tau_s, p.shots,
                                                   {seed, stream++});
            CoherencePoint cp =
                qubit_only_envelope(p.chi_hz, 1.0, p.kappa_hz, p.tau_s);
            double ref_re = cp.amplitude * std::cos(cp.phase);
            double ref_im = -cp.amplitude * std::sin(cp.phase);
            checks.push_back(three_sigma(std::string("qubit_") + p.tag + "_re",
                                         mc.mean.real(), ref_re,
                                         mc.std_error.real()));
            checks.push_back(three_sigma(std::string("qubit_") + p.tag + "_im",
                                         mc.mean.imag(), ref_im,
                                         mc.std_error.imag()));
        }
    }

    // Stationary number autocorrelation against n(n+1) e^{-kappa lag}.
    {
        const double n_bar = 1.0, kappa_hz = 1e3, tau_s = 1e-3;
        const double inv_kappa = 1.0 / (two_pi * kappa_hz);
        std::vector<double> lags = {0.5 * inv_kappa, inv_kappa,
                                    2.0 * inv_kappa};
        auto acf = trajectory_autocorrelation(n_bar, kappa_hz, tau_s, lags,
                                              trajectories, {seed, 500});
        for (std::size_t k = 0; k < acf.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "acf_lag%zu", k);
            checks.push_back(three_sigma(name, acf[k].value, acf[k].reference,
                                         acf[k].std_error));
        }
    }

    // Marginal at tau/2 against the geometric distribution (chi-squared at
    // the 0.1% level; n_sigma column holds statistic/critical for this row).
    {
        ChiSquaredResult chi =
            stationarity_chisq(1.0, 1e3, 1e-3, trajectories, {seed, 600});
        McCheck c;
        c.name = "stationarity_chisq_dof" + std::to_string(chi.dof);
        c.value = chi.statistic;
        c.reference = chi.critical_p001;
        c.std_error = 0.0;
        c.n_sigma = chi.statistic / chi.critical_p001;
        c.pass = chi.pass;
        checks.push_back(c);
    }

    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "mc_validate");
    RunManifest manifest = start_manifest("mc-validate", config, ctx);
    manifest.notes["qubit_points"] =
        "qubit checks pin their own shot counts; the quasi-static point runs "
        "at Gamma = 3e-3 and the Markovian point at Gamma = 0.1 so the "
        "second-cumulant closed form's truncation bias is far below the "
        "Monte Carlo resolution";

    CsvWriter csv(dir / (stem + ".csv"),
                  {"check", "value", "reference", "std_error", "n_sigma",
                   "pass"});
    std::vector<std::string> failed;
    for (const auto& c : checks) {
        csv.row_text({c.name, format_full(c.value), format_full(c.reference),
                      format_full(c.std_error), format_full(c.n_sigma),
                      c.pass ? "1" : "0"});
        if (!c.pass) failed.push_back(c.name);
    }
    csv.close();
    add_output(manifest, csv);
    finish_manifest(manifest, dir, stem);

    if (!failed.empty()) {
        std::string msg = "mc-validate: failed checks:";
        for (const auto& f : failed) msg += " " + f;
        throw NumericalError(msg);
    }
    return 0;
}

int cmd_validate(SweepConfig config, const RunContext& ctx) {
    check_axes(config, {});
    const std::uint64_t seed = config.master_seed;

    struct Check {
        std::string name;
        bool hard = true;
        bool pass = true;
        double value = 0.0;
        double expected = 0.0;
        std::string detail;
    };
    std::vector<Check> checks;

    // --- hard: the two exact-envelope routes agree ---------------------
    {
        const double pts[][2] = {
            {0.5, 0.1}, {1.0, 1.0}, {2.0, 4.0}, {2.0, 1e-3}, {1.0, 50.0}};
        double worst = 0.0;
        for (const auto& p : pts)
            worst = std::max(worst,
                             std::abs(coherence_envelope_exact(p[0], p[1]) -
                                      coherence_envelope_exact_quadrature(
                                          p[0], p[1])));
        checks.push_back({"envelope_route_agreement", true, worst <= 1e-10,
                          worst, 1e-10,
                          "max |series - quadrature| over spot grid"});
    }

    // --- hard: Monte Carlo spot checks (3 sigma) ------------------------
    {
        McEstimate g = mc_coherence_envelope(1.0, std::sqrt(0.5) / two_pi, 1.0,
                                             1.0, 20000, {seed, 700},
                                             PhaseStatistics::gaussian);
        double ref = coherence_envelope_exact(
            1.0, phase_variance(std::sqrt(0.5) / two_pi, 1.0, 1.0));
        double ns = std::abs(g.mean.real() - ref) / g.std_error.real();
        checks.push_back({"mc_gaussian_spot", true, ns <= 3.0, ns, 3.0,
                          "sampled Gaussian envelope vs exact average, "
                          "n_sigma"});

        McEstimate d =
            mc_coherence_envelope(2.0, 5e4, 1e-5, 1.0, 20000, {seed, 701},
                                  PhaseStatistics::discrete_thermal);
        double dref = discrete_coherence_reference(2.0, 5e4, 1e-5, 1.0);
        double dns = std::abs(d.mean.real() - dref) / d.std_error.real();
        checks.push_back({"mc_discrete_spot", true, dns <= 3.0, dns, 3.0,
                          "sampled Bose-Einstein envelope vs exact geometric "
                          "sum, n_sigma"});
    }

    // --- hard: exact diagonalization vs perturbative cross-Kerr ---------
    {
        CouplerCircuit base;
        base.omega_a_hz = 5.09e9;
        base.omega_b_hz = 5.24e9;
        base.omega_1_hz = 4.82e9;
        base.omega_2_hz = 5.00e9;
        base.g_a1_hz = 1.35e7;
        base.g_b2_hz = 1.2e7;
        base.j_xy_hz = 9e6;
        double tol = 0.25;
        std::string note = "relative |lambda_exact - lambda_pert|/|lambda_pert|"
                           " at coupling scales 1, 1/2, 1/4: ";
        if (ctx.inject_corruption) {
            tol = 1e-9;  // negative-control hook: corrupt the tolerance
            note = "[tolerance corrupted by test hook] " + note;
        }
        bool pass = true;
        double prev = INFINITY, first = 0.0;
        for (double s : {1.0, 0.5, 0.25}) {
            CouplerCircuit c = base.scaled_couplings(s);
            double lp = lambda_perturbative(
                chi_from_g(c.g_a1_hz, c.delta_a1_hz()),
                chi_from_g(c.g_b2_hz, c.delta_b2_hz()), c.j_xy_hz,
                c.delta_12_hz());
            LambdaExactResult ex = lambda_exact(c, FockTruncation{3});
            double rel = std::abs(ex.lambda_hz - lp) / std::abs(lp);
            if (s == 1.0) first = rel;
            pass = pass && ex.converged && rel < prev;
            prev = rel;
            note += format_full(rel) + " ";
        }
        pass = pass && first <= tol;
        checks.push_back({"ed_vs_pt_trend", true, pass, first, tol, note});
    }

    // --- hard: finite-difference derivative oracle ----------------------
    {
        const double omega = 1e9, kappa = 1e3, lambda = 5e4, alpha = 2.0,
                     chi_a = 2e4;
        const long n = as_count(config, "fd_points", 20.0);
        auto grid = [](double lo, double hi, long k) {
            std::vector<double> g(static_cast<std::size_t>(k));
            double l0 = std::log(lo), l1 = std::log(hi);
            for (long i = 0; i < k; ++i)
                g[std::size_t(i)] =
                    std::exp(l0 + (l1 - l0) * double(i) / double(k - 1));
            return g;
        };
        auto temps = grid(5e-3, 0.5, n);
        auto taus = grid(1e-6, 1e-3, n);
        double worst = 0.0;
        long included = 0, excluded = 0;
        for (Strategy strat : {Strategy::coherence_mediated,
                               Strategy::phase_shift, Strategy::qubit_only}) {
            for (double T : temps)
                for (double tau : taus) {
                    auto mode =
                        ThermalModeSpec::from_temperature(omega, kappa, T);
                    ProtocolParams proto;
                    proto.lambda_hz = lambda;
                    proto.tau_s = tau;
                    proto.alpha = alpha;
                    proto.chi_a_hz = chi_a;
                    CoherencePoint cp =
                        strategy_coherence(strat, omega, kappa, T, proto);
                    // The amplitude filter guards the ill-conditioned
                    // (dC)^2/(1-C^2) regime; the phase strategy has unit
                    // visibility by construction and stays included.
                    if (strat != Strategy::phase_shift &&
                        cp.amplitude >= 0.999) {
                        ++excluded;
                        continue;
                    }
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
                    // Below ~1e-300 the squared stencil differences land in
                    // the subnormal range where they carry too few mantissa
                    // bits for a 1e-3 relative comparison (and a QFI that
                    // small bounds nothing physical anyway).
                    if (analytic < 1e-300) {
                        ++excluded;
                        continue;
                    }
                    // A central difference only measures a derivative when
                    // the function moves by more than a rounding quantum
                    // across the stencil.  The closed-form envelope
                    // saturates at e^{-2 alpha^2}, where its temperature
                    // dependence drops below one ulp of the constant floor:
                    // those points carry no finite-difference signal and are
                    // excluded as ill-posed rather than compared.
                    CoherencePoint pl = strategy_coherence(
                        strat, omega, kappa, T * (1.0 - 1e-5), proto);
                    CoherencePoint ph = strategy_coherence(
                        strat, omega, kappa, T * (1.0 + 1e-5), proto);
                    auto quanta = [](double delta, double at) {
                        double u = std::nextafter(
                                       std::abs(at),
                                       std::numeric_limits<double>::infinity()) -
                                   std::abs(at);
                        return std::abs(delta) / u;
                    };
                    if (quanta(ph.amplitude - pl.amplitude, cp.amplitude) <
                            1e4 &&
                        quanta(ph.phase - pl.phase, cp.phase) < 1e4) {
                        ++excluded;
                        continue;
                    }
                    double fd = finite_difference_qfi(strat, mode, proto, 1e-5);
                    worst = std::max(worst,
                                     std::abs(analytic - fd) / analytic);
                    ++included;
                }
        }
        checks.push_back({"fd_derivative_oracle", true, worst <= 1e-3, worst,
                          1e-3,
                          "max relative |analytic - finite-difference| QFI "
                          "over " + std::to_string(included) +
                          " grid points (3 strategies, " +
                          std::to_string(excluded) + " excluded: saturated "
                          "amplitude or sub-ulp stencil)"});
    }

    // --- hard: tau^2 scaling of the phase strategy is exact -------------
    {
        auto mode = ThermalModeSpec::from_temperature(1e9, 0.0, 1e-2);
        double f1 = qfi_phase(mode, 5e4, 1e-5).qfi;
        double f2 = qfi_phase(mode, 5e4, 2e-5).qfi;
        bool pass = (f2 == 4.0 * f1);
        checks.push_back({"phase_tau_sq_exact", true, pass, f2 / f1, 4.0,
                          "F(2 tau)/F(tau), doubling is exact in IEEE "
                          "arithmetic"});
    }

    // --- soft: documented approximation gap of the closed form ----------
    {
        double s2 = 1e-3, alpha = 2.0;
        double ratio = std::log(coherence_envelope_closed(alpha, s2)) /
                       std::log(coherence_envelope_exact(alpha, s2));
        Check c;
        c.name = "weak_dephasing_rate_ratio";
        c.hard = false;
        c.pass = true;
        c.value = ratio;
        c.expected = 2.0;
        c.detail =
            "closed-form initial decay rate is 2*alpha^2*sigma^2 vs the exact "
            "alpha^2*sigma^2: measured ln-ratio at sigma^2 = 1e-3, alpha = 2 "
            "(expected band [1.8, 2.2])";
        checks.push_back(c);

        double sat_meas = coherence_envelope_exact(alpha, 50.0) /
                          coherence_envelope_closed(alpha, 50.0);
        // In the saturated limit the exact envelope is e^{-A} I_0(A): recover
        // I_0(A) from the library itself at a sigma^2 where every k >= 1 term
        // underflows.
        double bessel_i0 = coherence_envelope_exact(alpha, 1e12) *
                           std::exp(2.0 * alpha * alpha);
        Check s;
        s.name = "saturation_ratio";
        s.hard = false;
        s.pass = true;
        s.value = sat_meas;
        s.expected = bessel_i0;
        s.detail =
            "exact/closed envelope ratio at sigma^2 = 50, alpha = 2; the "
            "closed form saturates at e^{-2 alpha^2}, the exact average at "
            "e^{-2 alpha^2} I_0(2 alpha^2)";
        checks.push_back(s);

        double worst_gap = 0.0;
        for (double g2 : {1e-3, 1e-2, 1e-1, 1.0, 4.0, 10.0, 50.0})
            worst_gap = std::max(
                worst_gap, std::abs(coherence_envelope_closed(alpha, g2) -
                                    coherence_envelope_exact(alpha, g2)));
        Check g;
        g.name = "closed_vs_exact_max_gap";
        g.hard = false;
        g.pass = true;
        g.value = worst_gap;
        g.expected = 0.0;
        g.detail = "max |closed - exact| envelope over the sigma^2 spot grid "
                   "at alpha = 2 (documented model gap, not a defect)";
        checks.push_back(g);
    }

    // --- emit ------------------------------------------------------------
    auto dir = ensure_out_dir(ctx);
    const std::string stem = stem_for(config, "validate_report");
    RunManifest manifest = start_manifest("validate", config, ctx);
    if (ctx.inject_corruption)
        manifest.notes["inject_corruption"] = "tolerance corruption hook active";

    bool all_hard_pass = true;
    nlohmann::json jchecks = nlohmann::json::array();
    for (const auto& c : checks) {
        all_hard_pass = all_hard_pass && (c.pass || !c.hard);
        std::printf("[%s] %-28s value=%.*g expected=%.*g (%s) %s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), 12, c.value, 12,
                    c.expected, c.hard ? "hard" : "soft finding",
                    c.detail.c_str());
        jchecks.push_back({{"name", c.name},
                           {"kind", c.hard ? "hard" : "soft_finding"},
                           {"pass", c.pass},
                           {"value", c.value},
                           {"expected", c.expected},
                           {"detail", c.detail}});
    }
    nlohmann::json report;
    report["tool_version"] = tool_version;
    report["checks"] = jchecks;
    report["overall_pass"] = all_hard_pass;

    std::filesystem::path report_path = dir / (stem + ".json");
    {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + report_path.string() +
                          "' for writing");
        std::string text = report.dump(2) + "\n";
        out << text;
        out.flush();
        if (!out)
            throw IoError("write failure on '" + report_path.string() + "'");
        manifest.outputs.emplace_back(report_path.filename().string(),
                                      checksum_string(fnv1a64(text)));
    }
    finish_manifest(manifest, dir, stem);

    if (!all_hard_pass)
        throw NumericalError("validate: hard invariant failed (see report)");
    return 0;
}

std::string default_config(const std::string& command) {
    if (command == "qfi-coherence")
        return R"(# Coherence-mediated thermometry over a (temperature, interaction time)
# grid; a companion file holds the per-temperature optimal interaction time.
[sweep]
output = qfi_coherence.csv

[axis.temperature]
unit = K
scale = log
min = 5e-3
max = 5e-1
points = 40

[axis.tau]
unit = s
scale = log
min = 1e-6
max = 1e-3
points = 40

[fixed]
omega_a = 1e9 Hz
kappa_a = 0 Hz
lambda = 5e4 Hz
alpha = 2
nu = 1e4
)";
    if (command == "qfi-phase")
        return R"(# Phase-shift thermometry: QFI over temperature for three
# interaction times (one decade apart).
[sweep]
output = qfi_phase.csv

[axis.temperature]
unit = K
scale = log
min = 1e-3
max = 2.5
points = 60

[axis.tau]
unit = s
scale = log
min = 1e-5
max = 1e-3
points = 3

[fixed]
omega_a = 1e9 Hz
lambda = 5e4 Hz
nu = 1e4
)";
    if (command == "qfi-qubit")
        return R"(# Qubit-only Ramsey thermometry: QFI over interaction time at fixed
# temperature; the finite-linewidth filter sets a finite optimum.
[sweep]
output = qfi_qubit.csv

[axis.tau]
unit = s
scale = log
min = 1e-6
max = 1e-3
points = 60

[fixed]
omega_a = 1e9 Hz
kappa_a = 1e3 Hz
chi_a = 2e4 Hz
temperature = 1e-2 K
nu = 1e4
)";
    if (command == "coupler-map")
        return R"(# Engineered cross-Kerr rate over the two dispersive shifts at fixed
# exchange coupling and qubit-qubit detuning; contour crossings for
# lambda = 10..50 kHz land in a companion file.
[sweep]
output = coupler_map.csv

[axis.chi_a1]
unit = Hz
scale = linear
min = 1e6
max = 1e7
points = 46

[axis.chi_b2]
unit = Hz
scale = linear
min = 1e6
max = 1e7
points = 46

[fixed]
j_xy = 3e7 Hz
delta_12 = 1.8e8 Hz
)";
    if (command == "coupler-validate")
        return R"(# Exact diagonalization against the perturbative cross-Kerr formula on a
# four-body circuit, at coupling scales 1, 1/2, 1/4.  The relative error
# must shrink with the couplings.
[sweep]
output = coupler_validate.csv

[fixed]
omega_a = 5.09e9 Hz
omega_b = 5.24e9 Hz
omega_1 = 4.82e9 Hz
omega_2 = 5.00e9 Hz
g_a1 = 1.35e7 Hz
g_b2 = 1.2e7 Hz
j_xy = 9e6 Hz
n_max = 3
)";
    if (command == "visibility")
        return R"(# Ramsey visibility of a spectator qubit against readout window and
# dispersive coupling, for displaced-thermal and thermal photon statistics.
# kappa_m = 0 is the quasi-static limit.
[sweep]
output = visibility.csv

[axis.tau_R]
unit = s
scale = linear
min = 2e-7
max = 1e-5
points = 50

[axis.chi]
unit = Hz
scale = log
min = 1e4
max = 5e4
points = 3

[fixed]
n_bar_b = 1
alpha = 1
kappa_m = 0 Hz
)";
    if (command == "compare")
        return R"(# All three strategies side by side over interaction time at fixed
# temperature: QFI, visibility, and Fisher-information rate F/(tau+tau_oh).
[sweep]
output = compare.csv

[axis.tau]
unit = s
scale = log
min = 1e-7
max = 1e-2
points = 60

[fixed]
temperature = 1e-2 K
omega_a = 1e9 Hz
kappa_a = 1e3 Hz
lambda = 5e4 Hz
alpha = 2
chi_a = 2e4 Hz
nu = 1e4
tau_oh = 0 s
)";
    if (command == "mc-validate")
        return R"(# Seeded Monte Carlo oracles against closed forms and exact references:
# sampled envelopes, trajectory autocorrelation, stationarity chi-squared.
[sweep]
output = mc_validate.csv
shots = 100000

[fixed]
trajectories = 20000
)";
    if (command == "validate")
        return R"(# Full oracle comparison report: envelope route agreement, Monte Carlo
# spot checks, exact-vs-perturbative cross-Kerr trend, finite-difference
# derivative oracle.  Documented approximation gaps are soft findings.
[sweep]
output = validate_report.json

[fixed]
fd_points = 20
)";
    throw ConfigError("unknown command '" + command + "'");
}

int run_command(const std::string& command, const RunContext& ctx,
                const std::string& config_path) {
    try {
        SweepConfig config =
            config_path.empty()
                ? parse_config(default_config(command), "<builtin>")
                : parse_config_file(config_path);
        if (ctx.seed_override) config.master_seed = *ctx.seed_override;
        if (ctx.shots_override) {
            if (*ctx.shots_override <= 0)
                throw ConfigError("--shots must be > 0");
            config.shots = *ctx.shots_override;
        }

        if (command == "qfi-coherence")
            return cmd_fig_coherence_qfi(std::move(config), ctx);
        if (command == "qfi-phase")
            return cmd_fig_phase_qfi(std::move(config), ctx);
        if (command == "qfi-qubit") return cmd_qubit_qfi(std::move(config), ctx);
        if (command == "coupler-map")
            return cmd_coupler_map(std::move(config), ctx);
        if (command == "coupler-validate")
            return cmd_coupler_validate(std::move(config), ctx);
        if (command == "visibility")
            return cmd_visibility(std::move(config), ctx);
        if (command == "compare") return cmd_compare(std::move(config), ctx);
        if (command == "mc-validate")
            return cmd_mc_validate(std::move(config), ctx);
        if (command == "validate") return cmd_validate(std::move(config), ctx);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    }
}

}  // namespace thermoq::sweep
