#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dcrab/dynamics.hpp"
#include "dcrab/grid.hpp"

namespace dcrab {

namespace detail {

inline double row_abs_norm(const Matrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Applies the ordered product of midpoint-step exponentials to a block of
// column vectors via a truncated Taylor series of exp(A) with A = -i dt H.
// The step matrix is scaled by 1/n_sub and applied n_sub times, so the series
// argument always has norm <= 1 and m_terms keeps the truncation error at
// machine precision.
template <class MatD, class MatB>
void taylor_block_steps(const MatD& a0, const std::vector<MatD>& aj,
                        const double* const* ctrl, int n_steps, int n_sub, int m_terms,
                        MatB& y) {
    MatD m = a0;
    MatB t = y, acc = y, tmp = y;
    const double inv_sub = 1.0 / n_sub;
    for (int k = 0; k < n_steps; ++k) {
        m = a0;
        for (std::size_t j = 0; j < aj.size(); ++j) {
            double cm = 0.5 * (ctrl[j][k] + ctrl[j][k + 1]);
            m.noalias() += cm * aj[j];
        }
        if (n_sub > 1) m *= inv_sub;
        for (int s = 0; s < n_sub; ++s) {
            acc = y;
            t = y;
            for (int i = 1; i <= m_terms; ++i) {
                tmp.noalias() = m * t;
                t = tmp * (1.0 / i);
                acc += t;
            }
            y = acc;
        }
    }
}

}  // namespace detail

/// Fast midpoint-exponential propagation of a fixed block of initial columns.
/// Agrees with the eigendecomposition-based propagate() to round-off (see the
/// dual-route tests) but costs a handful of small matrix-vector products per
/// step, which is what makes the benchmark ensembles tractable.
class BlockPropagator {
  public:
    BlockPropagator(const ControlledHamiltonian& ham, const TimeGrid& grid)
        : grid_(grid), dim_(ham.dim()) {
        ham.validate();
        const Complex mi(0.0, -1.0);
        const double dt = grid.dt();
        a0_ = mi * dt * ham.drift;
        h0_norm_ = detail::row_abs_norm(ham.drift);
        for (const auto& h : ham.controls) {
            aj_.push_back(mi * dt * h);
            hj_norm_.push_back(detail::row_abs_norm(h));
        }
    }

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    int channels() const { return static_cast<int>(aj_.size()); }

    Eigen::MatrixXcd propagate_block(std::span<const Waveform> controls,
                                     const Eigen::MatrixXcd& block0) const {
        if (controls.size() != aj_.size())
            throw std::invalid_argument("propagate_block: need one waveform per control");
        for (const auto& w : controls)
            if (!(w.grid == grid_)) throw std::invalid_argument("propagate_block: waveform grid mismatch");
        if (block0.rows() != dim_) throw std::invalid_argument("propagate_block: block dimension mismatch");

        const double dt = grid_.dt();
        double theta = dt * h0_norm_;
        const double* ctrl[8] = {};
        if (aj_.size() > 8) throw std::invalid_argument("propagate_block: too many controls");
        for (std::size_t j = 0; j < aj_.size(); ++j) {
            ctrl[j] = controls[j].values.data();
            double cmax = 0.0;
            for (int k = 0; k + 1 < grid_.n_samples; ++k)
                cmax = std::max(cmax, std::abs(0.5 * (ctrl[j][k] + ctrl[j][k + 1])));
            theta += dt * cmax * hj_norm_[j];
        }
        if (!std::isfinite(theta)) throw std::runtime_error("propagate_block: non-finite control values");

        int n_sub = theta <= 1.0 ? 1 : static_cast<int>(std::ceil(theta));
        double theta_eff = theta / n_sub;
        int m_terms = 0;
        double term = 1.0;
        while (term > 1e-17 && m_terms < 40) {
            ++m_terms;
            term *= theta_eff / m_terms;
        }
        if (m_terms < 3) m_terms = 3;

        const int n_steps = grid_.n_samples - 1;
        switch (dim_) {
            case 3:
                if (block0.cols() == 2) return run<3, 2>(ctrl, n_steps, n_sub, m_terms, block0);
                break;
            case 4:
                if (block0.cols() == 1) return run<4, 1>(ctrl, n_steps, n_sub, m_terms, block0);
                break;
            case 8:
                if (block0.cols() == 1) return run<8, 1>(ctrl, n_steps, n_sub, m_terms, block0);
                break;
            case 16:
                if (block0.cols() == 1) return run<16, 1>(ctrl, n_steps, n_sub, m_terms, block0);
                break;
            default:
                break;
        }
        return run<Eigen::Dynamic, Eigen::Dynamic>(ctrl, n_steps, n_sub, m_terms, block0);
    }

  private:
    template <int D, int B>
    Eigen::MatrixXcd run(const double* const* ctrl, int n_steps, int n_sub, int m_terms,
                         const Eigen::MatrixXcd& block0) const {
        using MatD = Eigen::Matrix<Complex, D, D>;
        using MatB = Eigen::Matrix<Complex, D, B>;
        MatD a0 = a0_;
        std::vector<MatD> aj(aj_.begin(), aj_.end());
        MatB y = block0;
        detail::taylor_block_steps(a0, aj, ctrl, n_steps, n_sub, m_terms, y);
        return y;
    }

    TimeGrid grid_;
    int dim_;
    Matrix a0_;
    std::vector<Matrix> aj_;
    double h0_norm_ = 0.0;
    std::vector<double> hj_norm_;
};

}  // namespace dcrab
