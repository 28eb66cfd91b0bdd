#include "qgt/models.hpp"

#include <cmath>

namespace qgt {

namespace {
constexpr complexd kI{0.0, 1.0};

void check_direction(int mu) {
    if (mu != 0 && mu != 1)
        throw UnknownDirection("parameter direction must be 0 or 1");
}
} // namespace

QDeformedBasis q_pauli(double q) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw NonPositiveQ("q_pauli: q must be a positive finite real");
    QDeformedBasis basis;
    basis.q = q;
    basis.a = std::sqrt((1.0 + q * q) / 2.0);
    basis.b = std::sqrt((1.0 + 1.0 / (q * q)) / 2.0);
    basis.c = (1.0 + q * q) / (2.0 * q);
    basis.d = (1.0 - q * q) / (2.0 * q);
    basis.sigma_x << 0.0, basis.a, basis.b, 0.0;
    basis.sigma_y << 0.0, -kI * basis.a, kI * basis.b, 0.0;
    basis.sigma_z << 1.0 / q, 0.0, 0.0, -q;
    basis.eta << 1.0 / std::sqrt(q), 0.0, 0.0, std::sqrt(q);
    return basis;
}

Eigen::Matrix2cd assemble(const QDeformedBasis& basis, const BlochVector& d) {
    return d.dx * basis.sigma_x + d.dy * basis.sigma_y + d.dz * basis.sigma_z;
}

HamiltonianFamily::HamiltonianFamily(ModelVariant model, double q)
    : model_(std::move(model)), basis_(q_pauli(q)) {}

std::array<std::string, 2> HamiltonianFamily::parameter_names() const {
    return std::visit(
        [](const auto& m) -> std::array<std::string, 2> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ModelI>)
                return {"theta", "phi"};
            else if constexpr (std::is_same_v<T, ModelII>)
                return {"x", "y"};
            else
                return m.param_names;
        },
        model_);
}

BlochVector HamiltonianFamily::bloch(const ParamPoint& lam) const {
    return std::visit(
        [&](const auto& m) -> BlochVector {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ModelI>) {
                const double th = lam(0), ph = lam(1);
                return {0.5 * m.omega1 * std::sin(th) * std::cos(ph),
                        0.5 * m.omega1 * std::sin(th) * std::sin(ph),
                        0.5 * (m.delta1 * std::cos(th) + m.delta2)};
            } else if constexpr (std::is_same_v<T, ModelII>) {
                const double x = lam(0), y = lam(1);
                return {m.b_field * std::sin(x + y) * std::cos(x * y),
                        m.b_field * std::sin(x + y) * std::sin(x * y),
                        m.b_field * std::cos(x + y)};
            } else {
                return m.bloch(lam(0), lam(1));
            }
        },
        model_);
}

BlochVector HamiltonianFamily::bloch_derivative(const ParamPoint& lam, int mu) const {
    check_direction(mu);
    return std::visit(
        [&](const auto& m) -> BlochVector {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ModelI>) {
                const double th = lam(0), ph = lam(1);
                if (mu == 0)
                    return {0.5 * m.omega1 * std::cos(th) * std::cos(ph),
                            0.5 * m.omega1 * std::cos(th) * std::sin(ph),
                            -0.5 * m.delta1 * std::sin(th)};
                return {-0.5 * m.omega1 * std::sin(th) * std::sin(ph),
                        0.5 * m.omega1 * std::sin(th) * std::cos(ph), 0.0};
            } else if constexpr (std::is_same_v<T, ModelII>) {
                const double x = lam(0), y = lam(1);
                const double s = std::sin(x + y), c = std::cos(x + y);
                const double cp = std::cos(x * y), sp = std::sin(x * y);
                // d/dx [xy] = y, d/dy [xy] = x; d/dmu [x+y] = 1 either way.
                const double dprod = (mu == 0) ? y : x;
                return {m.b_field * (c * cp - s * sp * dprod),
                        m.b_field * (c * sp + s * cp * dprod),
                        -m.b_field * s};
            } else {
                if (m.bloch_derivative)
                    return m.bloch_derivative(lam(0), lam(1), mu);
                const double h = m.fd_step;
                ParamPoint p = lam, q2 = lam;
                p(mu) += h;
                q2(mu) -= h;
                const BlochVector bp = m.bloch(p(0), p(1));
                const BlochVector bm = m.bloch(q2(0), q2(1));
                return {(bp.dx - bm.dx) / (2 * h), (bp.dy - bm.dy) / (2 * h),
                        (bp.dz - bm.dz) / (2 * h)};
            }
        },
        model_);
}

Eigen::Matrix2cd HamiltonianFamily::hamiltonian(const ParamPoint& lam) const {
    return assemble(basis_, bloch(lam));
}

Eigen::Matrix2cd HamiltonianFamily::parameter_derivative(const ParamPoint& lam, int mu) const {
    return assemble(basis_, bloch_derivative(lam, mu));
}

Eigen::Matrix2cd HamiltonianFamily::force(const ParamPoint& lam, int mu) const {
    return -parameter_derivative(lam, mu);
}

std::pair<double, double> HamiltonianFamily::eigenvalues_closed_form(const ParamPoint& lam) const {
    const BlochVector d = bloch(lam);
    const double radicand = basis_.a * basis_.b * (d.dx * d.dx + d.dy * d.dy) +
                            basis_.c * basis_.c * d.dz * d.dz;
    if (radicand < 0.0)
        throw ComplexEigenvalues("eigenvalues_closed_form: negative radicand");
    const double shift = basis_.d * d.dz;
    const double root = std::sqrt(radicand);
    return {shift - root, shift + root};
}

BiorthogonalEigensystem HamiltonianFamily::eigensystem(const ParamPoint& lam,
                                                       const EigOptions& opt) const {
    return eig_biorthogonal(hamiltonian(lam), opt);
}

} // namespace qgt
