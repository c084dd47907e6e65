#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dcrab/grid.hpp"
#include "dcrab/rng.hpp"

namespace dcrab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// sigma acting on tensor factor `site` of `n` qubits; site 0 is the leftmost
/// (most significant) factor, so basis index bits read |q_0 q_1 ... q_{n-1}>.
inline Matrix embed_single(const Matrix& sigma, int site, int n) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n; ++k)
        out = kron(out, k == site ? sigma : Matrix::Identity(2, 2));
    return out;
}

inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// H(t) = drift + sum_j c_j(t) * controls[j]; all parts Hermitian.
struct ControlledHamiltonian {
    Matrix drift;
    std::vector<Matrix> controls;

    int dim() const { return static_cast<int>(drift.rows()); }

    void validate() const {
        if (drift.rows() != drift.cols()) throw std::invalid_argument("ControlledHamiltonian: drift not square");
        if (hermiticity_defect(drift) > 1e-12)
            throw std::invalid_argument("ControlledHamiltonian: drift not Hermitian");
        for (const auto& h : controls) {
            if (h.rows() != drift.rows() || h.cols() != drift.cols())
                throw std::invalid_argument("ControlledHamiltonian: control dimension mismatch");
            if (hermiticity_defect(h) > 1e-12)
                throw std::invalid_argument("ControlledHamiltonian: control not Hermitian");
        }
    }
};

/// Transverse+longitudinal field chain with a single global nearest-neighbour
/// coupling control.
struct IsingInstance {
    int n_qubits = 2;
    Eigen::VectorXd alpha;  // sigma_x coefficients, one per qubit, in [0,1]
    Eigen::VectorXd beta;   // sigma_z coefficients
    Vector psi0;
    Vector psit;
    double duration = 20.0;
};

inline ControlledHamiltonian ising_hamiltonian_parts(const IsingInstance& inst) {
    int n = inst.n_qubits;
    if (n < 2) throw std::invalid_argument("ising_hamiltonian_parts: need at least 2 qubits");
    if (inst.alpha.size() != n || inst.beta.size() != n)
        throw std::invalid_argument("ising_hamiltonian_parts: coefficient length mismatch");
    int dim = 1 << n;
    ControlledHamiltonian ham;
    ham.drift = Matrix::Zero(dim, dim);
    for (int q = 0; q < n; ++q)
        ham.drift += inst.alpha[q] * embed_single(pauli_x(), q, n) +
                     inst.beta[q] * embed_single(pauli_z(), q, n);
    Matrix coupling = Matrix::Zero(dim, dim);
    for (int q = 0; q + 1 < n; ++q)  // open chain
        coupling += embed_single(pauli_z(), q, n) * embed_single(pauli_z(), q + 1, n);
    ham.controls.push_back(std::move(coupling));
    return ham;
}

/// Anharmonic three-level ladder in the rotating frame; target is the qubit
/// X gate extended by the identity on the leakage level.
struct QutritInstance {
    double anharmonicity = -1.0;  // Delta, negative
    double duration = 12.5;
};

inline Eigen::Matrix3cd qutrit_target() {
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Zero();
    u(0, 1) = 1;
    u(1, 0) = 1;
    u(2, 2) = 1;
    return u;
}

inline Eigen::Matrix3cd qutrit_hamiltonian(const QutritInstance& inst, double cx, double cy) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(2, 2) = inst.anharmonicity;
    // ladder couplings sqrt(n)/2 * (cx sigma_x + cy sigma_y) on (n-1, n)
    for (int n = 1; n <= 2; ++n) {
        double g = 0.5 * std::sqrt(static_cast<double>(n));
        Complex off = g * Complex(cx, -cy);  // <n-1| H |n>
        h(n - 1, n) += off;
        h(n, n - 1) += std::conj(off);
    }
    return h;
}

inline ControlledHamiltonian qutrit_hamiltonian_parts(const QutritInstance& inst) {
    ControlledHamiltonian ham;
    ham.drift = qutrit_hamiltonian(inst, 0.0, 0.0);
    Eigen::Matrix3cd hx = qutrit_hamiltonian(inst, 1.0, 0.0);
    hx(2, 2) = 0.0;
    Eigen::Matrix3cd hy = qutrit_hamiltonian(inst, 0.0, 1.0);
    hy(2, 2) = 0.0;
    ham.controls.emplace_back(hx);
    ham.controls.emplace_back(hy);
    return ham;
}

namespace detail {

inline void check_controls(const ControlledHamiltonian& ham, std::span<const Waveform> controls,
                           const TimeGrid& grid) {
    if (controls.size() != ham.controls.size())
        throw std::invalid_argument("propagate: need one waveform per control");
    for (const auto& w : controls)
        if (!(w.grid == grid)) throw std::invalid_argument("propagate: waveform grid mismatch");
}

}  // namespace detail

/// Exact reference propagator: U(T) as the ordered product of midpoint-step
/// exponentials, each computed from a Hermitian eigendecomposition.
inline Matrix propagate(const ControlledHamiltonian& ham, std::span<const Waveform> controls,
                        const TimeGrid& grid) {
    detail::check_controls(ham, controls, grid);
    const int dim = ham.dim();
    const double dt = grid.dt();
    Matrix u = Matrix::Identity(dim, dim);
    Matrix h(dim, dim);
    for (int k = 0; k + 1 < grid.n_samples; ++k) {
        h = ham.drift;
        for (std::size_t j = 0; j < ham.controls.size(); ++j) {
            double mid = 0.5 * (controls[j].values[k] + controls[j].values[k + 1]);
            h += mid * ham.controls[j];
        }
        if (dim == 3) {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es;
            es.computeDirect(h);
            Eigen::Vector3cd ph;
            for (int i = 0; i < 3; ++i)
                ph[i] = std::polar(1.0, -es.eigenvalues()[i] * dt);
            u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * u;
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(h);
            Vector ph(dim);
            for (int i = 0; i < dim; ++i)
                ph[i] = std::polar(1.0, -es.eigenvalues()[i] * dt);
            u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * u;
        }
    }
    return u;
}

inline double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Final-state infidelity 1 - |<psi_t| U |psi_0>|^2.
inline double ising_infidelity(const Matrix& u, const Vector& psi0, const Vector& psit) {
    if (u.rows() != psi0.size() || u.rows() != psit.size())
        throw std::invalid_argument("ising_infidelity: dimension mismatch");
    Complex overlap = psit.adjoint() * (u * psi0);
    return 1.0 - std::norm(overlap);
}

/// Gate infidelity averaged over the six Bloch-axis qubit states embedded in
/// the two lowest levels: 1 - (1/6) sum |<j| U_t^dag U |j>|^2.
inline double qutrit_infidelity(const Matrix& u) {
    if (u.rows() != 3 || u.cols() != 3) throw std::invalid_argument("qutrit_infidelity: dim must be 3");
    const Eigen::Matrix3cd v = qutrit_target().adjoint() * u;
    const Complex inv_sqrt2(1.0 / std::numbers::sqrt2, 0.0);
    const Complex i_unit(0.0, 1.0);
    Eigen::Vector2cd axis[6] = {
        {1.0, 0.0},                          // +z
        {0.0, 1.0},                          // -z
        {inv_sqrt2, inv_sqrt2},              // +x
        {inv_sqrt2, -inv_sqrt2},             // -x
        {inv_sqrt2, i_unit * inv_sqrt2},     // +y
        {inv_sqrt2, -i_unit * inv_sqrt2},    // -y
    };
    double sum = 0.0;
    for (const auto& j : axis) {
        Eigen::Vector3cd in = Eigen::Vector3cd::Zero();
        in.head<2>() = j;
        Complex amp = j.dot((v * in).head<2>());
        sum += std::norm(amp);
    }
    return 1.0 - sum / 6.0;
}

inline Vector haar_random_state(int dim, RandomStream& rng) {
    Vector psi(dim);
    for (int i = 0; i < dim; ++i) psi[i] = Complex(rng.normal(), rng.normal());
    psi.normalize();
    return psi;
}

inline IsingInstance random_ising_instance(int n_qubits, double duration, RandomStream& rng) {
    if (n_qubits < 2 || n_qubits > 4)
        throw std::invalid_argument("random_ising_instance: qubit count must be 2, 3 or 4");
    IsingInstance inst;
    inst.n_qubits = n_qubits;
    inst.duration = duration;
    inst.alpha.resize(n_qubits);
    inst.beta.resize(n_qubits);
    for (int q = 0; q < n_qubits; ++q) inst.alpha[q] = rng.uniform01();
    for (int q = 0; q < n_qubits; ++q) inst.beta[q] = rng.uniform01();
    int dim = 1 << n_qubits;
    inst.psi0 = haar_random_state(dim, rng);
    inst.psit = haar_random_state(dim, rng);
    return inst;
}

}  // namespace dcrab
