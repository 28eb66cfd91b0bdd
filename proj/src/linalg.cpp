#include "qgt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qgt {

namespace {

bool all_finite(const cmat& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

double biorthonormality_residual(const cmat& left, const cmat& right) {
    cmat overlap = left.adjoint() * right;
    overlap -= cmat::Identity(overlap.rows(), overlap.cols());
    return overlap.cwiseAbs().maxCoeff();
}

// Closed-form eigenpairs of a 2x2 matrix. Returns raw (possibly complex)
// eigenvalues and unnormalized right eigenvectors.
void eig2_closed_form(const cmat& h, std::array<complexd, 2>& evals,
                      std::array<Eigen::Vector2cd, 2>& evecs) {
    const complexd half_tr = 0.5 * (h(0, 0) + h(1, 1));
    const complexd det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
    const complexd disc = std::sqrt(half_tr * half_tr - det);
    evals = {half_tr - disc, half_tr + disc};
    for (int k = 0; k < 2; ++k) {
        const complexd e = evals[k];
        // (h - e) v = 0; pick the better-conditioned null-space expression.
        Eigen::Vector2cd a(h(0, 1), e - h(0, 0));
        Eigen::Vector2cd b(e - h(1, 1), h(1, 0));
        evecs[k] = (a.norm() >= b.norm()) ? a : b;
        if (evecs[k].norm() == 0.0)
            evecs[k] = Eigen::Vector2cd(1.0, 0.0); // h proportional to identity
    }
}

int designated_component(const cvec& v, GaugeRule rule) {
    const double norm = v.norm();
    if (norm == 0.0)
        throw ZeroVector("gauge_fix: zero vector");
    if (rule == GaugeRule::LargestComponentRealPositive) {
        int idx = 0;
        v.cwiseAbs().maxCoeff(&idx);
        return idx;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-14 * norm)
            return static_cast<int>(i);
    throw ZeroVector("gauge_fix: no nonzero component");
}

} // namespace

void validate_matrix(const cmat& h) {
    if (h.rows() != h.cols())
        throw Error("matrix must be square");
    if (h.rows() < 1 || h.rows() > kMaxDim)
        throw Error("matrix dimension out of supported range [1, 16]");
    if (!all_finite(h))
        throw Error("matrix has non-finite entries");
}

BiorthogonalEigensystem eig_biorthogonal(const cmat& h, const EigOptions& opt) {
    validate_matrix(h);
    const int n = static_cast<int>(h.rows());

    Eigen::VectorXcd raw(n);
    cmat right(n, n);
    if (n == 2) {
        std::array<complexd, 2> evals;
        std::array<Eigen::Vector2cd, 2> evecs;
        eig2_closed_form(h, evals, evecs);
        for (int k = 0; k < 2; ++k) {
            raw(k) = evals[k];
            right.col(k) = evecs[k];
        }
    } else if (n == 1) {
        raw(0) = h(0, 0);
        right(0, 0) = 1.0;
    } else {
        Eigen::ComplexEigenSolver<cmat> solver(h, /*computeEigenvectors=*/true);
        if (solver.info() != Eigen::Success)
            throw Error("dense eigensolver failed to converge");
        raw = solver.eigenvalues();
        right = solver.eigenvectors();
    }

    // Reality gate: accepted pseudo-Hermitian inputs have real spectra.
    const double max_abs_e = raw.cwiseAbs().maxCoeff();
    const double imag_bound = opt.reality_tol * std::max(max_abs_e, 1e-300);
    for (int k = 0; k < n; ++k) {
        if (std::abs(raw(k).imag()) > imag_bound) {
            std::ostringstream msg;
            msg << "eigenvalue " << raw(k) << " has imaginary part beyond "
                << imag_bound << "; input is outside the real-spectrum regime";
            throw ComplexSpectrum(msg.str());
        }
    }

    // Sort ascending by (real) energy.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return raw(a).real() < raw(b).real(); });

    BiorthogonalEigensystem es;
    es.energies.resize(n);
    es.right.resize(n, n);
    for (int k = 0; k < n; ++k) {
        es.energies(k) = raw(order[k]).real();
        es.right.col(k) = right.col(order[k]).normalized();
    }

    // Degeneracy gate.
    const double range = es.energies(n - 1) - es.energies(0);
    double gap_tol = opt.gap_tol;
    if (gap_tol <= 0.0)
        gap_tol = std::max(1e-9 * range, 1e-12 * h.norm());
    for (int k = 0; k + 1 < n; ++k) {
        const double gap = es.energies(k + 1) - es.energies(k);
        if (gap <= gap_tol) {
            std::ostringstream msg;
            msg << "spectral gap " << gap << " at bands (" << k << "," << k + 1
                << ") is below tolerance " << gap_tol;
            throw DegenerateSpectrum(msg.str());
        }
    }

    // Rows of right^-1 are left bras; this pairs bands exactly and gives
    // <L_i|R_j> = delta_ij up to the conditioning of the eigenbasis.
    es.left = es.right.inverse().adjoint();
    es.residual = biorthonormality_residual(es.left, es.right);
    if (!(es.residual <= 1e-12)) {
        std::ostringstream msg;
        msg << "biorthonormality residual " << es.residual
            << " exceeds 1e-12; eigenbasis too ill-conditioned";
        throw DegenerateSpectrum(msg.str());
    }

    // Eigenvector quality gate.
    const double h_scale = std::max(h.norm(), 1e-300);
    for (int k = 0; k < n; ++k) {
        const double r = (h * es.right.col(k) - es.energies(k) * es.right.col(k)).norm();
        if (r > 1e-10 * h_scale)
            throw Error("eigenvector residual exceeds 1e-10 * ||H||");
    }
    return es;
}

cmat left_from_right(const cmat& right, const cmat& eta, const cmat* h) {
    validate_matrix(eta);
    if (eta.rows() != right.rows())
        throw DimensionMismatch("left_from_right: eta/right dimension mismatch");

    if ((eta - eta.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(eta.norm(), 1e-300))
        throw NotPseudoHermitian("left_from_right: eta is not Hermitian");

    Eigen::FullPivLU<cmat> lu(eta);
    if (!lu.isInvertible())
        throw NotPseudoHermitian("left_from_right: eta is singular");

    if (h != nullptr) {
        const cmat defect = h->adjoint() - eta * (*h) * lu.inverse();
        if (defect.norm() > 1e-10 * std::max(h->norm(), 1e-300))
            throw NotPseudoHermitian("left_from_right: H^dag != eta H eta^-1");
    }

    cmat left(right.rows(), right.cols());
    for (Eigen::Index k = 0; k < right.cols(); ++k) {
        const cvec candidate = eta * right.col(k);
        const complexd overlap = candidate.dot(right.col(k)); // <eta R|R>
        if (std::abs(overlap) < 1e-14 * candidate.norm() * right.col(k).norm())
            throw NotPseudoHermitian("left_from_right: eta-image orthogonal to right vector");
        // <s * candidate | R> = conj(s) * overlap = 1
        left.col(k) = candidate * std::conj(1.0 / overlap);
    }
    return left;
}

cvec gauge_fix(const cvec& v, GaugeRule rule) {
    const int idx = designated_component(v, rule);
    const complexd c = v(idx);
    if (std::abs(c) == 0.0)
        throw ZeroVector("gauge_fix: designated component vanishes");
    return v * (std::abs(c) / c);
}

void gauge_fix(BiorthogonalEigensystem& es, GaugeRule rule) {
    for (int k = 0; k < es.dim(); ++k) {
        const int idx = designated_component(es.right.col(k), rule);
        const complexd c = es.right(idx, k);
        const complexd phase = std::abs(c) / c; // |phase| = 1
        es.right.col(k) *= phase;
        // <L * conj(phase)^-1 | R * phase> keeps the pairing; for unit phase
        // the inverse conjugate equals the phase itself.
        es.left.col(k) *= phase;
    }
}

} // namespace qgt
