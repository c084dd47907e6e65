#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "dcrab/dynamics.hpp"
#include "dcrab/propagator.hpp"

namespace dcrab {

inline double clamp_fom(double j) { return std::clamp(j, 0.0, 1.0); }

/// State-transfer figure of merit for one random Ising instance. Evaluation
/// is pure: safe to call concurrently on a shared instance.
class IsingProblem {
  public:
    IsingProblem(IsingInstance inst, const TimeGrid& grid)
        : inst_(std::move(inst)), prop_(ising_hamiltonian_parts(inst_), grid) {}

    int channels() const { return 1; }
    const IsingInstance& instance() const { return inst_; }
    const TimeGrid& grid() const { return prop_.grid(); }

    double operator()(std::span<const Waveform> controls) const {
        Eigen::MatrixXcd out = prop_.propagate_block(controls, inst_.psi0);
        Complex overlap = inst_.psit.adjoint() * out.col(0);
        double j = 1.0 - std::norm(overlap);
        if (!std::isfinite(j)) throw std::runtime_error("IsingProblem: non-finite figure of merit");
        return clamp_fom(j);
    }

  private:
    IsingInstance inst_;
    BlockPropagator prop_;
};

/// X-gate figure of merit on the qubit subspace of the anharmonic qutrit.
/// Only the images of |0> and |1> are needed, so propagation runs on a 3x2
/// block instead of the full unitary.
class QutritProblem {
  public:
    QutritProblem(const QutritInstance& inst, const TimeGrid& grid)
        : inst_(inst), prop_(qutrit_hamiltonian_parts(inst), grid) {
        block0_ = Eigen::MatrixXcd::Zero(3, 2);
        block0_(0, 0) = 1.0;
        block0_(1, 1) = 1.0;
        w_ = qutrit_target().adjoint();
    }

    int channels() const { return 2; }
    const QutritInstance& instance() const { return inst_; }
    const TimeGrid& grid() const { return prop_.grid(); }

    double operator()(std::span<const Waveform> controls) const {
        Eigen::MatrixXcd out = prop_.propagate_block(controls, block0_);
        Eigen::MatrixXcd vb = w_ * out;  // 3x2: target-frame images of |0>, |1>
        const Complex inv_sqrt2(1.0 / std::numbers::sqrt2, 0.0);
        const Complex iu(0.0, 1.0);
        const Eigen::Vector2cd axis[6] = {
            {1.0, 0.0},
            {0.0, 1.0},
            {inv_sqrt2, inv_sqrt2},
            {inv_sqrt2, -inv_sqrt2},
            {inv_sqrt2, iu * inv_sqrt2},
            {inv_sqrt2, -iu * inv_sqrt2},
        };
        double sum = 0.0;
        for (const auto& j : axis) {
            Eigen::Vector3cd img = vb * j;
            sum += std::norm(j.dot(img.head<2>()));
        }
        double fom = 1.0 - sum / 6.0;
        if (!std::isfinite(fom)) throw std::runtime_error("QutritProblem: non-finite figure of merit");
        return clamp_fom(fom);
    }

  private:
    QutritInstance inst_;
    BlockPropagator prop_;
    Eigen::MatrixXcd block0_;
    Eigen::Matrix3cd w_;
};

}  // namespace dcrab
