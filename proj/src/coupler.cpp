#include "thermoq/coupler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermoq/physics.hpp"

namespace thermoq {

bool CouplerCircuit::outside_dispersive_regime() const {
    double da1 = delta_a1_hz(), db2 = delta_b2_hz(), d12 = delta_12_hz();
    if (da1 == 0.0 || db2 == 0.0 || d12 == 0.0) return true;
    return std::abs(g_a1_hz / da1) > 0.1 || std::abs(g_b2_hz / db2) > 0.1 ||
           std::abs(j_xy_hz / d12) > 0.2;
}

CouplerCircuit CouplerCircuit::scaled_couplings(double s) const {
    CouplerCircuit c = *this;
    c.g_a1_hz *= s;
    c.g_b2_hz *= s;
    c.j_xy_hz *= s;
    return c;
}

double chi_from_g(double g_hz, double delta_hz) {
    if (delta_hz == 0.0) throw std::domain_error("chi_from_g: zero detuning");
    return -g_hz * g_hz / delta_hz;  // the 2pi factors cancel: Hz in, Hz out
}

double lambda_perturbative(double chi_a1_hz, double chi_b2_hz, double j_xy_hz,
                           double delta_12_hz) {
    if (delta_12_hz == 0.0)
        throw std::domain_error("lambda_perturbative: zero Delta_12");
    double d = delta_12_hz;
    return 8.0 * chi_a1_hz * chi_b2_hz * j_xy_hz * j_xy_hz / (d * d * d);
}

std::size_t basis_index(int n_a, int n_b, int q1, int q2, int n_max) {
    return ((std::size_t(n_a) * std::size_t(n_max + 1) + std::size_t(n_b)) * 2 +
            std::size_t(q1)) * 2 + std::size_t(q2);
}

SymMatrix build_hamiltonian(const CouplerCircuit& circuit,
                            const FockTruncation& trunc) {
    if (trunc.n_max < 1)
        throw std::domain_error("build_hamiltonian: n_max must be >= 1");
    std::size_t per_mode = std::size_t(trunc.n_max) + 1;
    std::size_t dim = per_mode * per_mode * 4;
    if (dim * dim > 1000000)
        throw std::domain_error("build_hamiltonian: matrix exceeds 1e6 entries");

    double wa = two_pi * circuit.omega_a_hz;
    double wb = two_pi * circuit.omega_b_hz;
    double w1 = two_pi * circuit.omega_1_hz;
    double w2 = two_pi * circuit.omega_2_hz;
    double ga1 = two_pi * circuit.g_a1_hz;
    double gb2 = two_pi * circuit.g_b2_hz;
    double jxy = two_pi * circuit.j_xy_hz;

    SymMatrix H(dim);
    int nm = trunc.n_max;
    for (int na = 0; na <= nm; ++na)
        for (int nb = 0; nb <= nm; ++nb)
            for (int q1 = 0; q1 < 2; ++q1)
                for (int q2 = 0; q2 < 2; ++q2) {
                    std::size_t i = basis_index(na, nb, q1, q2, nm);
                    // H0: omega n for each mode, +/- omega/2 for each qubit.
                    H.at(i, i) = wa * na + wb * nb + w1 * (q1 - 0.5) +
                                 w2 * (q2 - 0.5);
                    // g_a1 (a sigma1+ + h.c.): |na, g> <-> |na-1, e>, element
                    // g_a1 sqrt(na).
                    if (na > 0 && q1 == 0) {
                        std::size_t j = basis_index(na - 1, nb, 1, q2, nm);
                        H.at(i, j) = H.at(j, i) = ga1 * std::sqrt(double(na));
                    }
                    if (nb > 0 && q2 == 0) {
                        std::size_t j = basis_index(na, nb - 1, q1, 1, nm);
                        H.at(i, j) = H.at(j, i) = gb2 * std::sqrt(double(nb));
                    }
                    // J_XY (sigma1+ sigma2- + h.c.): |e,g> <-> |g,e|.
                    if (q1 == 1 && q2 == 0) {
                        std::size_t j = basis_index(na, nb, 0, 1, nm);
                        H.at(i, j) = H.at(j, i) = jxy;
                    }
                }
    return H;
}

std::vector<std::vector<std::size_t>> excitation_blocks(
    const FockTruncation& trunc) {
    int nm = trunc.n_max;
    std::vector<std::vector<std::size_t>> blocks(std::size_t(2 * nm) + 3);
    for (int na = 0; na <= nm; ++na)
        for (int nb = 0; nb <= nm; ++nb)
            for (int q1 = 0; q1 < 2; ++q1)
                for (int q2 = 0; q2 < 2; ++q2)
                    blocks[std::size_t(na + nb + q1 + q2)].push_back(
                        basis_index(na, nb, q1, q2, nm));
    return blocks;
}

namespace {

DressedState decode_label(std::size_t idx, int n_max) {
    DressedState s;
    s.q2 = int(idx % 2); idx /= 2;
    s.q1 = int(idx % 2); idx /= 2;
    s.n_b = int(idx % std::size_t(n_max + 1));
    s.n_a = int(idx / std::size_t(n_max + 1));
    return s;
}

// Assign each bare target in one excitation block to a distinct dressed
// level by maximum overlap (states outside the block are exactly orthogonal,
// so only the block matters).  Targets are processed in ascending bare index
// so that a contested dressed level goes to the lowest bare label; within a
// target, equal overlaps resolve to the lower eigenvalue (strict > scan).
std::vector<DressedState> assign_in_block(
    const SymMatrix& H, const std::vector<std::size_t>& block,
    std::vector<std::size_t> targets, int n_max) {
    SymMatrix sub(block.size());
    for (std::size_t r = 0; r < block.size(); ++r)
        for (std::size_t c = 0; c < block.size(); ++c)
            sub.at(r, c) = H.at(block[r], block[c]);
    EigenResult eig = eigensolve_symmetric(sub);

    std::sort(targets.begin(), targets.end());
    std::vector<bool> claimed(eig.n, false);
    std::vector<DressedState> out;
    for (std::size_t target : targets) {
        std::size_t local = block.size();
        for (std::size_t r = 0; r < block.size(); ++r)
            if (block[r] == target) local = r;
        if (local == block.size())
            throw std::logic_error("lambda_exact: target state not in block");

        std::size_t best_k = eig.n;
        double best_ov = -1.0;
        for (std::size_t k = 0; k < eig.n; ++k) {
            if (claimed[k]) continue;
            double amp = eig.vector(local, k);
            if (amp * amp > best_ov) {
                best_ov = amp * amp;
                best_k = k;
            }
        }
        claimed[best_k] = true;
        DressedState s = decode_label(target, n_max);
        s.energy_rad_s = eig.values[best_k];
        s.overlap_sq = best_ov;
        s.ambiguous = best_ov <= 0.5;
        out.push_back(s);
    }
    return out;
}

// lambda at one fixed truncation, with the four assignments.
LambdaExactResult lambda_at(const CouplerCircuit& circuit, int n_max) {
    FockTruncation trunc{n_max};
    SymMatrix H = build_hamiltonian(circuit, trunc);
    auto blocks = excitation_blocks(trunc);

    // |00gg> (N=0), |10gg>, |01gg> (N=1), |11gg> (N=2).
    std::size_t s00 = basis_index(0, 0, 0, 0, n_max);
    std::size_t s10 = basis_index(1, 0, 0, 0, n_max);
    std::size_t s01 = basis_index(0, 1, 0, 0, n_max);
    std::size_t s11 = basis_index(1, 1, 0, 0, n_max);

    LambdaExactResult out;
    out.n_max_used = n_max;
    out.assignments[0] = assign_in_block(H, blocks[0], {s00}, n_max)[0];
    // Both single-excitation targets live in the N=1 block; assign them
    // together so they end up on distinct dressed levels.
    auto one = assign_in_block(H, blocks[1], {s10, s01}, n_max);
    // assign_in_block sorts by bare index: s01 < s10 in flat order.
    for (const auto& s : one) {
        if (s.n_a == 1) out.assignments[1] = s;
        else out.assignments[2] = s;
    }
    out.assignments[3] = assign_in_block(H, blocks[2], {s11}, n_max)[0];

    double lam_rad = out.assignments[3].energy_rad_s -
                     out.assignments[1].energy_rad_s -
                     out.assignments[2].energy_rad_s +
                     out.assignments[0].energy_rad_s;
    out.lambda_hz = lam_rad / two_pi;
    return out;
}

}  // namespace

LambdaExactResult lambda_exact(const CouplerCircuit& circuit,
                               FockTruncation trunc) {
    if (trunc.n_max < 2)
        throw std::domain_error(
            "lambda_exact: n_max must be >= 2 (the |11gg> manifold needs it)");

    // Raise n_max until the result moves by < 1% (or by less than the
    // eigensolver noise floor relative to the bare scale), cap at 6.
    double noise_floor = 1e-12 * std::abs(circuit.omega_a_hz);
    LambdaExactResult prev = lambda_at(circuit, trunc.n_max);
    for (int nm = trunc.n_max + 1; nm <= 6; ++nm) {
        LambdaExactResult cur = lambda_at(circuit, nm);
        double step = std::abs(cur.lambda_hz - prev.lambda_hz);
        cur.convergence_step_rel =
            step / std::max(std::abs(cur.lambda_hz), 1e-300);
        if (step <= noise_floor || cur.convergence_step_rel < 0.01) {
            cur.converged = true;
            return cur;
        }
        prev = cur;
    }
    prev.converged = false;  // hit the cap without a sub-1% step
    return prev;
}

double inverse_purcell(double g_hz, double delta_hz, double t1_s) {
    if (t1_s <= 0.0) throw std::domain_error("inverse_purcell: T1 must be > 0");
    if (delta_hz == 0.0)
        throw std::domain_error("inverse_purcell: zero detuning");
    double ratio = g_hz / delta_hz;
    return ratio * ratio / (two_pi * t1_s);
}

}  // namespace thermoq
