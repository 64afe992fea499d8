#ifndef NETSHRINK_SVD_HPP
#define NETSHRINK_SVD_HPP

#include <cstdint>

#include <Eigen/Core>

#include "netshrink/linops.hpp"

namespace netshrink {

struct SvdOptions {
    // Convergence: ||X v_k - s_k u_k|| and ||X^T u_k - s_k v_k|| <= tol * s_1.
    double tol = 1e-9;
    std::uint64_t seed = 0x6e5d;
    int max_restarts = 0;  // 0 = 50 * rank
    int subspace = 0;      // working subspace dimension; 0 = auto
};

// Rank-r truncated SVD plus a spectral-gap estimate from one extra triple.
struct SvdFactors {
    int rank = 0;
    Eigen::VectorXd singular_values;  // descending, size rank
    Eigen::MatrixXd left_vectors;     // n x rank, orthonormal columns
    Eigen::MatrixXd right_vectors;    // n x rank
    double gap = 0.0;                 // s_r - s_{r+1} estimate
    double residual = 0.0;            // achieved max relative residual
    bool degenerate_gap = false;      // gap < 1e-10: callers should warn

    double objective() const { return singular_values.squaredNorm(); }
};

// Lanczos bidiagonalization with full reorthogonalization and thick
// restarts. Deterministic given the seed. Computes r+1 triples internally;
// the extra one feeds the gap estimate. For degenerate spectra an arbitrary
// orthonormal basis of the tied subspace is returned and degenerate_gap set.
SvdFactors truncated_svd(const LinearOperator& op, int rank, const SvdOptions& opts = {});

// Sum of the top-r squared singular values.
double objective(const LinearOperator& op, int rank, const SvdOptions& opts = {});

// Lazy rank-r reconstruction: entry (i,j) of sum_k s_k u_k v_k^T in O(r).
class LowRankMatrix {
public:
    explicit LowRankMatrix(SvdFactors factors) : f_(std::move(factors)) {}

    double entry(int i, int j) const {
        double s = 0.0;
        for (int k = 0; k < f_.rank; ++k)
            s += f_.singular_values[k] * f_.left_vectors(i, k) * f_.right_vectors(j, k);
        return s;
    }
    Eigen::MatrixXd dense() const {
        return f_.left_vectors * f_.singular_values.asDiagonal() *
               f_.right_vectors.transpose();
    }
    const SvdFactors& factors() const { return f_; }

private:
    SvdFactors f_;
};

inline LowRankMatrix low_rank_reconstruct(SvdFactors factors) {
    return LowRankMatrix(std::move(factors));
}

}  // namespace netshrink

#endif
