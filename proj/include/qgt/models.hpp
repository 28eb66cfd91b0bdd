#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>

#include "qgt/linalg.hpp"

namespace qgt {

using ParamPoint = Eigen::Vector2d;

// q-deformed Pauli matrices and the metric operator eta = diag(q^-1/2, q^1/2).
// Reduces to the standard Pauli set with eta = I at q = 1.
struct QDeformedBasis {
    double q = 1.0;
    double a = 1.0; // sqrt((1+q^2)/2)
    double b = 1.0; // sqrt((1+q^-2)/2)
    double c = 1.0; // (1+q^2)/(2q)
    double d = 0.0; // (1-q^2)/(2q)
    Eigen::Matrix2cd sigma_x, sigma_y, sigma_z;
    Eigen::Matrix2cd eta;
};

QDeformedBasis q_pauli(double q);

struct BlochVector {
    double dx = 0.0, dy = 0.0, dz = 0.0;
};

// d(theta, phi) = (Omega1 sin(th) cos(ph), Omega1 sin(th) sin(ph),
//                  Delta1 cos(th) + Delta2) / 2.
// Frequencies are angular; captions quoting "Omega/2pi = 10" mean
// omega1 = 2*pi*10 here.
struct ModelI {
    double omega1 = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
};

// d(x, y) = B (sin(x+y) cos(xy), sin(x+y) sin(xy), cos(x+y)).
struct ModelII {
    double b_field = 0.0;
};

// Extension point: any Bloch-vector map. When no analytic derivative is
// supplied, forces fall back to central finite differences of the map.
struct CustomModel {
    std::function<BlochVector(double, double)> bloch;
    std::function<BlochVector(double, double, int)> bloch_derivative; // may be empty
    std::array<std::string, 2> param_names = {"l1", "l2"};
    double fd_step = 1e-6;
};

using ModelVariant = std::variant<ModelI, ModelII, CustomModel>;

// A parameterized two-band pseudo-Hermitian family H(lambda) = d(lambda) . sigma~.
class HamiltonianFamily {
  public:
    HamiltonianFamily(ModelVariant model, double q);

    const QDeformedBasis& basis() const { return basis_; }
    const Eigen::Matrix2cd& eta() const { return basis_.eta; }
    double q() const { return basis_.q; }
    const ModelVariant& model() const { return model_; }
    std::array<std::string, 2> parameter_names() const;

    BlochVector bloch(const ParamPoint& lam) const;
    BlochVector bloch_derivative(const ParamPoint& lam, int mu) const;

    Eigen::Matrix2cd hamiltonian(const ParamPoint& lam) const;
    // dH/dlambda_mu; mu must be 0 or 1.
    Eigen::Matrix2cd parameter_derivative(const ParamPoint& lam, int mu) const;
    // Generalized force f_mu = -dH/dlambda_mu.
    Eigen::Matrix2cd force(const ParamPoint& lam, int mu) const;

    // (E_minus, E_plus) = d*dz -+ sqrt(ab (dx^2+dy^2) + c^2 dz^2).
    std::pair<double, double> eigenvalues_closed_form(const ParamPoint& lam) const;

    BiorthogonalEigensystem eigensystem(const ParamPoint& lam,
                                        const EigOptions& opt = {}) const;

  private:
    ModelVariant model_;
    QDeformedBasis basis_;
};

Eigen::Matrix2cd assemble(const QDeformedBasis& basis, const BlochVector& d);

} // namespace qgt
