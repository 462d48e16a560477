#include "qoutlier/qmat.hpp"

#include <cmath>
#include <random>
#include <string>

namespace qoutlier {

int qubits_for_dim(Eigen::Index dim) {
    if (dim < 2) throw DimensionError("dimension must be >= 2, got " + std::to_string(dim));
    int n = 0;
    Eigen::Index d = dim;
    while (d > 1) {
        if (d % 2 != 0) throw DimensionError("dimension is not a power of 2: " + std::to_string(dim));
        d /= 2;
        ++n;
    }
    if (n > kMaxQubits) throw ResourceError("dimension exceeds the 2^12 cap");
    return n;
}

double max_norm(const Matrix& m) {
    return m.cwiseAbs().maxCoeff();
}

PureState::PureState(int n_qubits, Vector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) {
        throw DimensionError("n_qubits out of range [1, 12]: " + std::to_string(n_qubits_));
    }
    if (amplitudes_.size() != (Eigen::Index(1) << n_qubits_)) {
        throw DimensionError("amplitude count does not match 2^n_qubits");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTol) {
        throw ContractError("state is not normalized");
    }
}

HermitianOp::HermitianOp(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw DimensionError("Hermitian operator must be square");
    }
    n_qubits_ = qubits_for_dim(entries_.rows());
    if (max_norm(entries_ - entries_.adjoint()) > kHermTol) {
        throw ContractError("matrix is not Hermitian within tolerance");
    }
}

DensityMatrix::DensityMatrix(HermitianOp base) : base_(std::move(base)) {
    if (std::abs(base_.trace_real() - 1.0) > 1e-9) {
        throw ContractError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(base_.entries(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
        throw ContractError("density matrix has a negative eigenvalue");
    }
}

Projector::Projector(HermitianOp base) : base_(std::move(base)) {
    const Matrix& p = base_.entries();
    if (max_norm(p * p - p) > kIdemTol) {
        throw ContractError("projector is not idempotent within tolerance");
    }
    const double tr = base_.trace_real();
    rank_ = std::lround(tr);
    if (std::abs(tr - double(rank_)) > 1e-6) {
        throw ContractError("projector trace is not an integer");
    }
}

PureState haar_sample(int n_qubits, const RngStream& rng) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw DimensionError("haar_sample: n_qubits out of range [1, 12]");
    }
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    auto eng = rng.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = gauss(eng);
        const double im = gauss(eng);
        v(i) = Complex(re, im);
    }
    v.normalize();
    return PureState(n_qubits, std::move(v));
}

std::pair<double, Vector> lambda_max_psd(const HermitianOp& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    if (es.info() != Eigen::Success) {
        throw ContractError("eigendecomposition failed");
    }
    if (es.eigenvalues().minCoeff() < -1e-7) {
        throw ContractError("lambda_max_psd: operator is not PSD within tolerance");
    }
    const Eigen::Index last = h.dim() - 1;
    Vector vec = es.eigenvectors().col(last);
    vec.normalize();
    return {es.eigenvalues()(last), std::move(vec)};
}

DensityMatrix tensor_power(const DensityMatrix& sigma, int k) {
    if (k < 1) throw DomainError("tensor_power: k must be >= 1");
    const long total_qubits = long(sigma.n_qubits()) * k;
    if (total_qubits > kMaxQubits) {
        throw ResourceError("tensor_power: result exceeds the 2^12 cap");
    }
    Matrix out = sigma.entries();
    for (int i = 1; i < k; ++i) {
        Matrix next(out.rows() * sigma.dim(), out.cols() * sigma.dim());
        for (Eigen::Index r = 0; r < out.rows(); ++r) {
            for (Eigen::Index c = 0; c < out.cols(); ++c) {
                next.block(r * sigma.dim(), c * sigma.dim(), sigma.dim(), sigma.dim()) =
                    out(r, c) * sigma.entries();
            }
        }
        out = std::move(next);
    }
    return DensityMatrix(std::move(out));
}

DensityMatrix maximally_mixed(int n_qubits) {
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    return DensityMatrix(Matrix(Matrix::Identity(dim, dim) / double(dim)));
}

Projector basis_projector(int n_qubits, int m) {
    if (m < 0 || m > n_qubits) throw DomainError("basis_projector: need 0 <= m <= n");
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Matrix p = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < (Eigen::Index(1) << m); ++i) p(i, i) = 1.0;
    return Projector(std::move(p));
}

Projector haar_projector(int n_qubits, int m, const RngStream& rng) {
    if (m < 1 || m > n_qubits) throw DomainError("haar_projector: need 1 <= m <= n");
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    const Eigen::Index rank = Eigen::Index(1) << m;
    auto eng = rng.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            g(r, c) = Complex(gauss(eng), gauss(eng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = Matrix(qr.householderQ()).leftCols(rank);
    return Projector(Matrix(q * q.adjoint()));
}

} // namespace qoutlier
