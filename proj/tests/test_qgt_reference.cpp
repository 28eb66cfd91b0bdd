#include <doctest.h>

#include <qgt/qgt_reference.hpp>

#include "oracles.hpp"

using namespace qgt;

namespace {

const double kTwoPi = 2.0 * M_PI;

HamiltonianFamily benchmark_model1(double q = 3.0, double delta2_over_2pi = 0.0) {
    return HamiltonianFamily(ModelI{kTwoPi * 10.0, kTwoPi * 15.0, kTwoPi * delta2_over_2pi}, q);
}

HamiltonianFamily benchmark_model2(double q = 3.0) {
    return HamiltonianFamily(ModelII{kTwoPi * 15.0}, q);
}

HamiltonianFamily isotropic_hermitian() {
    return HamiltonianFamily(ModelI{1.0, 1.0, 0.0}, 1.0);
}

} // namespace

TEST_CASE("qgt_spectral: Hermitian isotropic closed forms") {
    const HamiltonianFamily fam = isotropic_hermitian();
    for (const ParamPoint lam : {ParamPoint(0.9, 0.4), ParamPoint(2.2, -1.0), ParamPoint(1.3, 3.0)}) {
        const double s = std::sin(lam(0));
        CHECK(std::abs(qgt_spectral(fam, lam, 0, 0).value - complexd{0.25, 0.0}) <= 1e-12);
        CHECK(std::abs(qgt_spectral(fam, lam, 1, 1).value - complexd{s * s / 4, 0.0}) <= 1e-12);
        // Ground band: Im Q_{phi theta} = sin(theta)/4.
        CHECK(std::abs(qgt_spectral(fam, lam, 1, 0).value - complexd{0.0, s / 4}) <= 1e-12);
    }
}

TEST_CASE("qgt_spectral: Model I off-diagonal metric vanishes everywhere") {
    const HamiltonianFamily fam = benchmark_model1();
    for (int k = 0; k <= 20; ++k) {
        const ParamPoint lam(0.05 + (M_PI - 0.1) * k / 20.0, 0.7);
        const complexd q_pt = qgt_spectral(fam, lam, 1, 0).value;
        CHECK(std::abs(q_pt.real()) <= 1e-10);
    }
}

TEST_CASE("qgt_spectral: frozen benchmark fixture at theta = pi/3") {
    // Reference values computed ahead of the build with an independent
    // finite-difference oracle (gauge-fixed eigenvectors, Richardson
    // extrapolated) and cross-checked against the Hermitian-equivalent
    // closed form; Q_phiphi is exactly 1/9 here.
    const HamiltonianFamily fam = benchmark_model1();
    const ParamPoint lam(M_PI / 3, 0.0);

    const complexd q_tt = qgt_spectral(fam, lam, 0, 0).value;
    const complexd q_pp = qgt_spectral(fam, lam, 1, 1).value;
    const complexd q_pt = qgt_spectral(fam, lam, 1, 0).value;
    const complexd q_tp = qgt_spectral(fam, lam, 0, 1).value;

    CHECK(std::abs(q_tt - complexd{0.329218106995885, 0.0}) <= 1e-12);
    CHECK(std::abs(q_pp - complexd{0.111111111111111, 0.0}) <= 1e-12);
    CHECK(std::abs(q_pt - complexd{0.0, 0.191258436849749}) <= 1e-12);
    CHECK(std::abs(q_tp - complexd{0.0, -0.191258436849749}) <= 1e-12);

    // The in-tree FD oracle reproduces the fixture independently.
    FdOptions opt;
    opt.richardson = true;
    CHECK(std::abs(qgt_fd(fam, lam, 0, 0, 0, opt).value - q_tt) <= 1e-9);
    CHECK(std::abs(qgt_fd(fam, lam, 1, 0, 0, opt).value - q_pt) <= 1e-9);
}

TEST_CASE("qgt_fd agrees with qgt_spectral at h = 1e-4 with O(h^2) convergence") {
    const HamiltonianFamily fam = benchmark_model1();
    const HamiltonianFamily fam2 = benchmark_model2();

    struct Probe {
        const HamiltonianFamily* fam;
        ParamPoint lam;
    };
    const Probe probes[] = {
        {&fam, ParamPoint(M_PI / 3, 0.0)},
        {&fam, ParamPoint(1.9, 0.6)},
        {&fam2, ParamPoint(1.0, M_PI / 2)},
    };
    for (const Probe& probe : probes) {
        for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu) {
                const complexd spectral = qgt_spectral(*probe.fam, probe.lam, mu, nu).value;
                FdOptions opt;
                opt.step = 1e-4;
                const complexd fd_h = qgt_fd(*probe.fam, probe.lam, mu, nu, 0, opt).value;
                CHECK(std::abs(fd_h - spectral) <= 1e-6);
            }
    }

    // Convergence order: error shrinks ~4x when h halves.
    const ParamPoint lam(M_PI / 3, 0.0);
    const complexd spectral = qgt_spectral(fam, lam, 0, 0).value;
    FdOptions coarse, fine;
    coarse.step = 2e-3;
    fine.step = 1e-3;
    const double err_coarse = std::abs(qgt_fd(fam, lam, 0, 0, 0, coarse).value - spectral);
    const double err_fine = std::abs(qgt_fd(fam, lam, 0, 0, 0, fine).value - spectral);
    const double ratio = err_coarse / err_fine;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.5);

    // Diagonal components are real and nonnegative in the Hermitian limit.
    const HamiltonianFamily faml = isotropic_hermitian();
    const complexd diag = qgt_fd(faml, ParamPoint(1.1, 0.2), 0, 0).value;
    CHECK(std::abs(diag.imag()) <= 1e-10);
    CHECK(diag.real() >= 0.0);
}

TEST_CASE("qgt_fd: step-consistency guard") {
    const HamiltonianFamily fam = benchmark_model1();
    FdOptions opt;
    opt.richardson = true;
    opt.step = 0.5; // absurdly coarse: h vs h/2 disagree visibly
    opt.consistency_tol = 1e-4;
    CHECK_THROWS_AS(qgt_fd(fam, ParamPoint(M_PI / 3, 0.0), 0, 0, 0, opt), StepTooLarge);
}

TEST_CASE("QGT Hermiticity on benchmark grids") {
    for (const HamiltonianFamily& fam : {benchmark_model1(3.0, 8.0), benchmark_model2()}) {
        for (int k = 0; k < 9; ++k) {
            const ParamPoint lam(0.2 + 0.31 * k, 0.9);
            const complexd q_mn = qgt_spectral(fam, lam, 0, 1).value;
            const complexd q_nm = qgt_spectral(fam, lam, 1, 0).value;
            CHECK(std::abs(q_mn - std::conj(q_nm)) <= 1e-10);
            CHECK(std::abs(qgt_spectral(fam, lam, 0, 0).value.imag()) <= 1e-10);
        }
    }
}

TEST_CASE("qgt_spectral is invariant under biorthogonal rescaling") {
    const HamiltonianFamily fam = benchmark_model1();
    const ParamPoint lam(0.8, 0.3);
    const cmat dh0 = fam.parameter_derivative(lam, 0);
    const cmat dh1 = fam.parameter_derivative(lam, 1);

    BiorthogonalEigensystem es = fam.eigensystem(lam);
    const complexd reference = qgt_spectral_from(es, dh0, dh1, 0);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mag(0.2, 3.0), arg(-M_PI, M_PI);
    for (int rep = 0; rep < 10; ++rep) {
        BiorthogonalEigensystem scaled = es;
        for (int n = 0; n < 2; ++n) {
            const complexd c = std::polar(mag(rng), arg(rng));
            scaled.right.col(n) *= c;
            scaled.left.col(n) *= 1.0 / std::conj(c); // keeps <L|R> = 1
        }
        CHECK(std::abs(qgt_spectral_from(scaled, dh0, dh1, 0) - reference) <= 1e-12);
    }
}

TEST_CASE("unit-Bloch closed form is reproduced by the spectral path") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (double q : {1.0, 3.0}) {
        const HamiltonianFamily m1 = benchmark_model1(q, 6.0);
        const HamiltonianFamily m2 = benchmark_model2(q);
        for (int rep = 0; rep < 12; ++rep) {
            const ParamPoint lam(u(rng), u(rng));
            for (const HamiltonianFamily* fam : {&m1, &m2}) {
                // Skip parameter points too close to a band degeneracy.
                const auto [e0, e1] = fam->eigenvalues_closed_form(lam);
                if (e1 - e0 < 1e-3 * std::abs(e1))
                    continue;
                for (int mu = 0; mu < 2; ++mu)
                    for (int nu = 0; nu < 2; ++nu) {
                        const complexd spectral = qgt_spectral(*fam, lam, mu, nu).value;
                        const complexd oracle = testing::qgt_unit_bloch(*fam, lam, mu, nu);
                        CHECK(std::abs(spectral - oracle) <= 1e-10 * (1.0 + std::abs(oracle)));
                    }
            }
        }
    }
}

TEST_CASE("metric_curvature: examples and symmetry") {
    QGTComponent q_mn{complexd{0.25, 0.0}, 0, 0, 1, ParamPoint(0.5, 0.5)};
    QGTComponent q_nm{complexd{0.25, 0.0}, 0, 1, 0, ParamPoint(0.5, 0.5)};
    const MetricCurvaturePair pair = metric_curvature(q_mn, q_nm);
    CHECK(pair.g == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pair.f == doctest::Approx(0.0).epsilon(1e-15));

    // Isotropic Hermitian ground band: Q_theta phi = -i s/4, Q_phi theta = +i s/4
    // gives F_theta phi = sin(theta)/2 (the spin-1/2 monopole curvature).
    const double s = std::sin(0.7);
    QGTComponent q_tp{complexd{0.0, -s / 4}, 0, 0, 1, ParamPoint(0.7, 0.0)};
    QGTComponent q_pt{complexd{0.0, s / 4}, 0, 1, 0, ParamPoint(0.7, 0.0)};
    const MetricCurvaturePair monopole = metric_curvature(q_tp, q_pt);
    CHECK(monopole.f == doctest::Approx(s / 2).epsilon(1e-14));
    CHECK(monopole.g == doctest::Approx(0.0).epsilon(1e-14));

    // Antisymmetry is exact by construction; diagonal curvature vanishes.
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        QGTComponent a{complexd{gauss(rng), gauss(rng)}, 0, 0, 1, ParamPoint(0, 0)};
        QGTComponent b{complexd{gauss(rng), gauss(rng)}, 0, 1, 0, ParamPoint(0, 0)};
        const MetricCurvaturePair fwd = metric_curvature(a, b);
        std::swap(a.mu, a.nu);
        std::swap(b.mu, b.nu);
        const MetricCurvaturePair rev = metric_curvature(b, a);
        CHECK(fwd.f == doctest::Approx(-rev.f).epsilon(1e-15));
        CHECK(fwd.g == doctest::Approx(rev.g).epsilon(1e-15));
    }
    QGTComponent diag{complexd{0.3, 0.1}, 0, 0, 0, ParamPoint(0, 0)};
    CHECK(metric_curvature(diag, diag).f == doctest::Approx(0.0).epsilon(1e-15));

    QGTComponent mismatched{complexd{0.0, 0.0}, 1, 1, 0, ParamPoint(0.5, 0.5)};
    CHECK_THROWS_AS(metric_curvature(q_mn, mismatched), IndexMismatch);
}

TEST_CASE("chern_number: quantization and transition") {
    // Unit monopole charge in the Hermitian isotropic limit.
    const ChernResult iso = chern_number(isotropic_hermitian(), 0.0, 201);
    CHECK(std::abs(iso.c - 1.0) <= 1e-3);

    // q = 3 benchmark: C = 1 below the transition, 0 above it.
    const ChernResult below = chern_number(benchmark_model1(3.0, 0.0), 0.0, 201);
    CHECK(std::abs(below.c - 1.0) <= 1e-3);
    CHECK(below.delta2_over_delta1 == doctest::Approx(0.0));

    const ChernResult above = chern_number(benchmark_model1(3.0, 30.0), 0.0, 21);
    CHECK(std::abs(above.c) <= 0.1);
    CHECK(above.delta2_over_delta1 == doctest::Approx(2.0));

    CHECK_THROWS_AS(chern_number(benchmark_model1(), 0.0, 1), Error);

    // Model II curvature depends on the second parameter; the reduction to a
    // line integral is invalid and the phi-independence assertion must fire.
    CHECK_THROWS_AS(chern_number(benchmark_model2(), 0.0, 21), Error);
}

TEST_CASE("degenerate points are reported, not silently computed") {
    // H vanishes exactly at l1 = 0 while dH does not.
    CustomModel line;
    line.bloch = [](double l1, double) { return BlochVector{l1, 0.0, 0.0}; };
    const HamiltonianFamily degenerate(line, 3.0);
    CHECK_THROWS_AS(qgt_spectral(degenerate, ParamPoint(0.0, 0.0), 0, 0), DegenerateSpectrum);
}
