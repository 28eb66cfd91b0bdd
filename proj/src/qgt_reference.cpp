#include "qgt/qgt_reference.hpp"

#include <cmath>
#include <sstream>

namespace qgt {

complexd qgt_spectral_from(const BiorthogonalEigensystem& es, const cmat& dh_mu,
                           const cmat& dh_nu, int band) {
    const int n = es.dim();
    if (band < 0 || band >= n)
        throw IndexMismatch("qgt_spectral_from: band out of range");
    complexd q = 0.0;
    for (int m = 0; m < n; ++m) {
        if (m == band)
            continue;
        const complexd num_mu = es.left.col(band).dot(dh_mu * es.right.col(m));
        const complexd num_nu = es.left.col(m).dot(dh_nu * es.right.col(band));
        const double gap = es.energies(band) - es.energies(m);
        q += num_mu * num_nu / (gap * gap);
    }
    return q;
}

QGTComponent qgt_spectral(const HamiltonianFamily& family, const ParamPoint& lam,
                          int mu, int nu, int band) {
    const BiorthogonalEigensystem es = family.eigensystem(lam);
    const cmat dh_mu = family.parameter_derivative(lam, mu);
    const cmat dh_nu = family.parameter_derivative(lam, nu);
    return {qgt_spectral_from(es, dh_mu, dh_nu, band), band, mu, nu, lam};
}

namespace {

struct FixedPair {
    cvec right;
    cvec left;
};

FixedPair eig_fixed(const HamiltonianFamily& family, const ParamPoint& lam,
                    int band, GaugeRule rule) {
    BiorthogonalEigensystem es = family.eigensystem(lam);
    gauge_fix(es, rule);
    return {es.right.col(band), es.left.col(band)};
}

complexd qgt_fd_single(const HamiltonianFamily& family, const ParamPoint& lam,
                       int mu, int nu, int band, double h, GaugeRule rule) {
    auto shifted = [&](int dir, double delta) {
        ParamPoint p = lam;
        p(dir) += delta;
        return eig_fixed(family, p, band, rule);
    };
    const FixedPair mu_p = shifted(mu, h), mu_m = shifted(mu, -h);
    const FixedPair nu_p = shifted(nu, h), nu_m = shifted(nu, -h);
    const FixedPair center = eig_fixed(family, lam, band, rule);

    const cvec d_left_mu = (mu_p.left - mu_m.left) / (2.0 * h);
    const cvec d_right_nu = (nu_p.right - nu_m.right) / (2.0 * h);

    return d_left_mu.dot(d_right_nu) -
           d_left_mu.dot(center.right) * center.left.dot(d_right_nu);
}

} // namespace

QGTComponent qgt_fd(const HamiltonianFamily& family, const ParamPoint& lam,
                    int mu, int nu, int band, const FdOptions& opt) {
    const complexd q_h = qgt_fd_single(family, lam, mu, nu, band, opt.step, opt.gauge);
    if (!opt.richardson)
        return {q_h, band, mu, nu, lam};

    const complexd q_h2 = qgt_fd_single(family, lam, mu, nu, band, opt.step / 2.0, opt.gauge);
    const complexd extrap = (4.0 * q_h2 - q_h) / 3.0;
    const double disagreement = std::abs(q_h - q_h2);
    if (disagreement > opt.consistency_tol * (std::abs(extrap) + opt.consistency_floor)) {
        std::ostringstream msg;
        msg << "qgt_fd: step " << opt.step << " vs " << opt.step / 2.0
            << " disagree by " << disagreement << "; step too large";
        throw StepTooLarge(msg.str());
    }
    return {extrap, band, mu, nu, lam};
}

MetricCurvaturePair metric_curvature(const QGTComponent& q_munu,
                                     const QGTComponent& q_numu) {
    if (q_munu.band != q_numu.band || q_munu.mu != q_numu.nu ||
        q_munu.nu != q_numu.mu ||
        (q_munu.lambda - q_numu.lambda).cwiseAbs().maxCoeff() > 0.0)
        throw IndexMismatch("metric_curvature: components are not an index-swapped pair");
    MetricCurvaturePair out;
    out.g = 0.5 * (q_munu.value + q_numu.value).real();
    out.f = (complexd{0.0, 1.0} * (q_munu.value - q_numu.value)).real();
    return out;
}

double berry_curvature(const HamiltonianFamily& family, const ParamPoint& lam,
                       int mu, int nu, int band) {
    const QGTComponent q_mn = qgt_spectral(family, lam, mu, nu, band);
    const QGTComponent q_nm = qgt_spectral(family, lam, nu, mu, band);
    return metric_curvature(q_mn, q_nm).f;
}

ChernResult chern_number(const HamiltonianFamily& family, double phi_fixed,
                         int n_theta) {
    if (n_theta < 2)
        throw Error("chern_number: need at least 2 theta points");

    auto f_at = [&](double theta, double phi) {
        return berry_curvature(family, ParamPoint(theta, phi), 0, 1, 0);
    };

    // The reduction of the surface integral to a theta line integral uses
    // phi-independence of F_{theta phi}; check it rather than assume it.
    {
        const double theta_probe = 0.37 * M_PI;
        const double f0 = f_at(theta_probe, phi_fixed);
        const double f1 = f_at(theta_probe, phi_fixed + 1.0);
        if (std::abs(f0 - f1) > 1e-8 * (std::abs(f0) + 1e-12))
            throw Error("chern_number: F_{theta phi} depends on phi for this family");
    }

    const double h = M_PI / (n_theta - 1);
    double c = 0.0;
    for (int k = 0; k < n_theta; ++k) {
        const double theta = k * h;
        const double w = (k == 0 || k == n_theta - 1) ? 0.5 : 1.0;
        c += w * f_at(theta, phi_fixed);
    }
    c *= h;

    ChernResult out;
    out.c = c;
    out.grid_points = n_theta;
    if (const auto* m1 = std::get_if<ModelI>(&family.model()))
        if (m1->delta1 != 0.0)
            out.delta2_over_delta1 = m1->delta2 / m1->delta1;
    return out;
}

} // namespace qgt
