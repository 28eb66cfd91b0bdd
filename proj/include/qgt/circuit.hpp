#pragma once

#include <cstdint>

#include "qgt/linalg.hpp"

namespace qgt {

// Statevector over 2n+1 qubits: one ancilla (most significant) and two
// n-qubit registers, |anc> (x) |reg1> (x) |reg2>.
struct StateVector {
    int num_qubits = 0;
    cvec amplitudes;
};

struct HermitianObservable {
    cmat matrix;
};

// A = A_plus + i A_minus with both parts Hermitian:
// A_plus = (A + A^dag)/2, A_minus = (A - A^dag)/(2i).
std::pair<HermitianObservable, HermitianObservable> hermitian_split(const cmat& a);

// Hadamard on the ancilla, then ancilla-controlled SWAP of the registers:
// (|0>|psi1>|psi2> + |1>|psi2>|psi1>)/sqrt(2). Inputs must be unit norm and
// of equal power-of-two dimension.
StateVector build_output_state(const cvec& psi1, const cvec& psi2);

enum class AncillaPauli { X, Y };

// <Psi|sigma_{x,y} (x) O (x) I|Psi> = Re,Im[<psi1|O|psi2><psi2|psi1>].
double readout(const StateVector& output, const HermitianObservable& obs, AncillaPauli pauli);

// Generalized expectation via the controlled-SWAP circuit: both Hermitian
// parts of A are read out and divided by the shared denominator
// |<psi1|psi2>|^2 (the O = I, sigma_x readout). Inputs are normalized
// internally; the ratio is scale-invariant.
complexd gev_via_circuit(const cvec& psi1, const cvec& psi2, const cmat& a);

// Shot-sampling mode for realism studies: each readout is estimated by
// sampling projective ancilla-observable outcomes. Not used in acceptance
// bounds.
struct ShotOptions {
    int shots = 10000;
    std::uint64_t seed = 0;
};

struct SampledGev {
    complexd value;
    double denominator_estimate = 0.0;
    int shots_per_readout = 0;
};

SampledGev gev_via_circuit_sampled(const cvec& psi1, const cvec& psi2, const cmat& a,
                                   const ShotOptions& opt);

} // namespace qgt
