#include "fermirpa/kernel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fermirpa {

namespace {
constexpr double PI = 3.14159265358979323846;
} // namespace

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& A, double s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("spd_power: eigensolve failed");
    const double floor = 1e-13 * std::max(1.0, A.trace());
    Eigen::VectorXd ev = es.eigenvalues();
    Eigen::VectorXd evp(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < floor) {
            std::ostringstream os;
            os << "spd_power: eigenvalue " << ev(i) << " below floor " << floor
               << " for exponent " << s;
            throw std::runtime_error(os.str());
        }
        evp(i) = std::pow(ev(i), s);
    }
    return es.eigenvectors() * evp.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd spd_log(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("spd_log: eigensolve failed");
    const double floor = 1e-13 * std::max(1.0, A.trace());
    Eigen::VectorXd ev = es.eigenvalues();
    Eigen::VectorXd evl(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < floor) {
            std::ostringstream os;
            os << "spd_log: eigenvalue " << ev(i) << " below floor " << floor;
            throw std::runtime_error(os.str());
        }
        evl(i) = std::log(ev(i));
    }
    return es.eigenvectors() * evl.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd matrix_abs(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd AAt = A * A.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(AAt);
    if (es.info() != Eigen::Success) throw std::runtime_error("matrix_abs: eigensolve failed");
    const double emax = es.eigenvalues().maxCoeff();
    const double emin = es.eigenvalues().minCoeff();
    if (!(emin > 0.0) || emax / emin > 1e14)
        throw std::runtime_error("matrix_abs: argument is singular to working precision");
    Eigen::VectorXd ev = es.eigenvalues().cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd sherman_morrison_inverse(const Eigen::MatrixXd& Ainv,
                                         const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& w) {
    Eigen::VectorXd Av = Ainv * v;
    Eigen::VectorXd Atw = Ainv.transpose() * w;
    const double denom = 1.0 + w.dot(Av);
    if (std::abs(denom) < 1e-14)
        throw std::runtime_error("sherman_morrison_inverse: update is singular");
    return Ainv - (Av * Atw.transpose()) / denom;
}

IdentityCheck verify_integral_identities(const Eigen::MatrixXd& A,
                                         const QuadratureSpec& spec) {
    const Eigen::Index n = A.rows();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    // The adaptive grid differs per entry; a mu-keyed cache shares the matrix
    // solve between entries whose panels happen to coincide.
    std::map<double, Eigen::MatrixXd> cache;
    auto resolvent = [&](double mu) -> const Eigen::MatrixXd& {
        auto it = cache.find(mu);
        if (it == cache.end())
            it = cache.emplace(mu, (A + mu * mu * I).ldlt().solve(I)).first;
        return it->second;
    };

    Eigen::MatrixXd int_sqrt(n, n), int_inv(n, n);
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            auto f_sqrt = [&](double mu) { return delta - mu * mu * resolvent(mu)(i, j); };
            auto f_inv = [&](double mu) { return resolvent(mu)(i, j); };
            QuadratureResult rs = integrate_semi_infinite(f_sqrt, spec);
            QuadratureResult ri = integrate_semi_infinite(f_inv, spec);
            ok = ok && rs.converged && ri.converged;
            int_sqrt(i, j) = rs.value;
            int_inv(i, j) = ri.value;
        }

    IdentityCheck out;
    const double two_over_pi = 2.0 / PI;
    out.dev_sqrt = (two_over_pi * int_sqrt - spd_power(A, 0.5)).cwiseAbs().maxCoeff();
    out.dev_inv_sqrt = (two_over_pi * int_inv - spd_power(A, -0.5)).cwiseAbs().maxCoeff();
    out.converged = ok;
    return out;
}

std::optional<int> KernelBundle::index_of(int alpha) const {
    for (std::size_t i = 0; i < plus_list.size(); ++i)
        if (plus_list[i] == alpha) return static_cast<int>(i);
    for (std::size_t i = 0; i < minus_list.size(); ++i)
        if (minus_list[i] == alpha) return static_cast<int>(m() + i);
    return std::nullopt;
}

std::optional<int> KernelBundle::plus_slot_of(int alpha) const {
    for (std::size_t i = 0; i < plus_list.size(); ++i)
        if (plus_list[i] == alpha || minus_list[i] == alpha) return static_cast<int>(i);
    return std::nullopt;
}

double KernelBundle::Q(double mu) const {
    double s = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double n2 = static_cast<double>(counts[i]);
        s += n2 * lambda[i] / (mu * mu + lambda[i] * lambda[i]);
    }
    return 2.0 * g * s;
}

KernelBundle build_kernel(Momentum3 k, const PatchSet& ps, const ModelParams& mp,
                          const FermiGeometry& geom) {
    KernelBundle kb;
    kb.k = k;
    kb.vhat = mp.vhat.value(k);
    if (!(kb.vhat > 0.0))
        throw std::invalid_argument("build_kernel: V_hat(k) is zero; skip this mode");
    const double knorm = k.norm();
    kb.g = kb.vhat / (2.0 * mp.hbar * mp.kappa * static_cast<double>(mp.N) * knorm);

    IndexSets idx = index_sets(k, ps, mp);
    std::vector<std::int64_t> counts = pair_counts_for_k(k, ps, geom, idx);

    // Antipodal patches see mirrored pair configurations, so the minus half
    // duplicates the plus half exactly; store one copy and keep the minus
    // labels in mirror order.  Zero-count patches carry empty rows and are
    // pruned before any square root is taken.
    for (int a : idx.plus) {
        const int anti = ps.patch(a).antipode;
        if (counts[a - 1] != counts[anti - 1])
            throw std::logic_error("build_kernel: antipodal pair counts disagree");
        if (counts[a - 1] > 0) {
            kb.plus_list.push_back(a);
            kb.minus_list.push_back(anti);
        } else {
            kb.pruned.push_back(a);
            kb.pruned.push_back(anti);
        }
    }
    const int m = kb.m();
    if (m == 0)
        throw std::invalid_argument("build_kernel: no patch pairs couple to this mode");

    kb.lambda.resize(m);
    kb.nvec.resize(m);
    kb.counts.resize(m);
    for (int i = 0; i < m; ++i) {
        const Patch& p = ps.patch(kb.plus_list[i]);
        kb.lambda[i] = std::abs(dot(k, p.omega_hat)) / knorm;
        kb.counts[i] = counts[kb.plus_list[i] - 1];
        kb.nvec[i] = std::sqrt(static_cast<double>(kb.counts[i]));
    }

    const int dim = 2 * m;
    Eigen::VectorXd lam(dim), nv(dim);
    for (int i = 0; i < m; ++i) {
        lam(i) = kb.lambda[i];
        lam(m + i) = kb.lambda[i];
        nv(i) = kb.nvec[i];
        nv(m + i) = kb.nvec[i];
    }
    Eigen::MatrixXd D = lam.asDiagonal();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd Wt = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double val = kb.g * nv(i) * nv(j);
            if ((i < m) == (j < m)) W(i, j) = val;
            else Wt(i, j) = val;
        }

    Eigen::MatrixXd Sm = spd_power(D + W - Wt, 0.5);
    kb.E = spd_power(Sm * (D + W + Wt) * Sm, 0.5);
    kb.S1 = Sm * spd_power(kb.E, -0.5);
    // |S1^T| in the polar sense (X^T X)^(1/2), i.e. (S1 S1^T)^(1/2); this is
    // the object whose half-fold blocks are d^(1/2) mid^(-1/2) d^(1/2), the
    // form the per-mode mu-integral reproduces exactly.
    kb.K = spd_log(matrix_abs(kb.S1));

    // cosh(2K) - 1 = 2 sinh(K)^2 through K's eigensystem.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kb.K);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("build_kernel: eigensolve of K failed");
    Eigen::VectorXd sh = es.eigenvalues();
    for (Eigen::Index i = 0; i < sh.size(); ++i) {
        const double s = std::sinh(sh(i));
        sh(i) = 2.0 * s * s;
    }
    kb.cosh2Km1 = es.eigenvectors() * sh.asDiagonal() * es.eigenvectors().transpose();
    return kb;
}

AbcdValues abcd_identities(const std::vector<double>& lambda,
                           const std::vector<double>& nvec, double g, int slot) {
    const int m = static_cast<int>(lambda.size());
    Eigen::VectorXd lam(m), nv(m);
    for (int i = 0; i < m; ++i) { lam(i) = lambda[i]; nv(i) = nvec[i]; }
    Eigen::MatrixXd d = lam.asDiagonal();
    Eigen::MatrixXd d2b = d + 2.0 * g * (nv * nv.transpose());

    Eigen::MatrixXd dh = spd_power(d, 0.5), dmh = spd_power(d, -0.5);
    Eigen::MatrixXd bh = spd_power(d2b, 0.5), bmh = spd_power(d2b, -0.5);
    Eigen::MatrixXd mid1 = dh * d2b * dh; // d^(1/2) (d+2b) d^(1/2)
    Eigen::MatrixXd mid2 = bh * d * bh;   // (d+2b)^(1/2) d (d+2b)^(1/2)

    AbcdValues out;
    out.A = (dh * spd_power(mid1, -0.5) * dh)(slot, slot);
    out.B = (bh * spd_power(mid2, -0.5) * bh)(slot, slot);
    out.C = (dmh * spd_power(mid1, 0.5) * dmh)(slot, slot);
    out.D = (bmh * spd_power(mid2, 0.5) * bmh)(slot, slot);
    out.combination = 0.25 * (out.A + out.B + out.C + out.D - 4.0);
    return out;
}

double verify_block_reduction(const KernelBundle& kb) {
    const int m = kb.m();
    const int dim = 2 * m;
    if (m == 0) return std::numeric_limits<double>::quiet_NaN();
    // |S1^T|^2 = S1 S1^T commutes with the half-swap, so conjugation by
    // U = (1/sqrt2) [[I, I], [I, -I]] reduces it to the two m x m blocks
    //   blockA = d^(1/2) (d^(1/2)(d+2b)d^(1/2))^(-1/2) d^(1/2)
    //   blockB = (d+2b)^(1/2) ((d+2b)^(1/2) d (d+2b)^(1/2))^(-1/2) (d+2b)^(1/2).
    Eigen::MatrixXd S2 = kb.S1 * kb.S1.transpose();
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(dim, dim);
    const double c = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < m; ++i) {
        U(i, i) = c;
        U(i, m + i) = c;
        U(m + i, i) = c;
        U(m + i, m + i) = -c;
    }
    Eigen::MatrixXd T = U.transpose() * S2 * U;

    Eigen::VectorXd lam(m), nv(m);
    for (int i = 0; i < m; ++i) { lam(i) = kb.lambda[i]; nv(i) = kb.nvec[i]; }
    Eigen::MatrixXd d = lam.asDiagonal();
    Eigen::MatrixXd d2b = d + 2.0 * kb.g * (nv * nv.transpose());
    Eigen::MatrixXd dh = spd_power(d, 0.5);
    Eigen::MatrixXd bh = spd_power(d2b, 0.5);
    Eigen::MatrixXd blockA = dh * spd_power(dh * d2b * dh, -0.5) * dh;
    Eigen::MatrixXd blockB = bh * spd_power(bh * d * bh, -0.5) * bh;

    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(dim, dim);
    ref.topLeftCorner(m, m) = blockA;
    ref.bottomRightCorner(m, m) = blockB;
    return (T - ref).cwiseAbs().maxCoeff();
}

} // namespace fermirpa
