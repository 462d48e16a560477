#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <utility>

#include "qoutlier/errors.hpp"
#include "qoutlier/rng.hpp"

namespace qoutlier {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kNormTol = 1e-9;   // state normalization
inline constexpr double kHermTol = 1e-9;   // per-entry Hermiticity
inline constexpr double kIdemTol = 1e-8;   // per-entry idempotency
inline constexpr int kMaxQubits = 12;      // dense desk-scale cap

// log2 of a power-of-two dimension; rejects non-powers.
int qubits_for_dim(Eigen::Index dim);

// Largest absolute entry of a matrix.
double max_norm(const Matrix& m);

/// Unit vector in a 2^n dimensional complex space.
class PureState {
public:
    PureState(int n_qubits, Vector amplitudes);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const Vector& amplitudes() const { return amplitudes_; }

    Matrix outer() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
    int n_qubits_;
    Vector amplitudes_;
};

/// Square complex matrix equal to its conjugate transpose (within kHermTol).
class HermitianOp {
public:
    explicit HermitianOp(Matrix entries);

    Eigen::Index dim() const { return entries_.rows(); }
    int n_qubits() const { return n_qubits_; }
    const Matrix& entries() const { return entries_; }

    double trace_real() const { return entries_.trace().real(); }

private:
    int n_qubits_;
    Matrix entries_;
};

/// Positive semidefinite Hermitian operator with unit trace.
class DensityMatrix {
public:
    explicit DensityMatrix(HermitianOp base);
    explicit DensityMatrix(Matrix entries) : DensityMatrix(HermitianOp(std::move(entries))) {}

    const HermitianOp& base() const { return base_; }
    const Matrix& entries() const { return base_.entries(); }
    Eigen::Index dim() const { return base_.dim(); }
    int n_qubits() const { return base_.n_qubits(); }

private:
    HermitianOp base_;
};

/// Hermitian idempotent; rank is the multiplicity of eigenvalue 1.
class Projector {
public:
    explicit Projector(HermitianOp base);
    explicit Projector(Matrix entries) : Projector(HermitianOp(std::move(entries))) {}

    const HermitianOp& base() const { return base_; }
    const Matrix& entries() const { return base_.entries(); }
    Eigen::Index dim() const { return base_.dim(); }
    int n_qubits() const { return base_.n_qubits(); }
    long rank() const { return rank_; }

private:
    HermitianOp base_;
    long rank_;
};

/// Haar-distributed unit vector: 2^n independent standard complex Gaussians,
/// normalized. Deterministic given the stream.
PureState haar_sample(int n_qubits, const RngStream& rng);

/// Largest eigenvalue of a PSD Hermitian operator, with a unit eigenvector.
std::pair<double, Vector> lambda_max_psd(const HermitianOp& h);

/// k-fold tensor power of a density matrix.
DensityMatrix tensor_power(const DensityMatrix& sigma, int k);

DensityMatrix maximally_mixed(int n_qubits);

/// Identity on the span of the first 2^m basis vectors of an n-qubit space.
Projector basis_projector(int n_qubits, int m);

/// Haar-random rank-2^m projector (span of 2^m columns of a Haar unitary).
Projector haar_projector(int n_qubits, int m, const RngStream& rng);

} // namespace qoutlier
