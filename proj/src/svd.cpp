#include "netshrink/svd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace netshrink {

ProductOperator::ProductOperator(std::vector<const SparseMatrix*> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty()) throw DataError("product operator: no factors");
    n_ = static_cast<int>(factors_.front()->rows());
    for (const SparseMatrix* f : factors_)
        if (f->rows() != n_ || f->cols() != n_)
            throw DataError("product operator: factors must be square with equal dimension");
}

ProductOperator::ProductOperator(const GraphSequence& seq) {
    owned_.reserve(static_cast<std::size_t>(seq.step_count()));
    for (const WeightedGraph& g : seq.steps()) owned_.push_back(g.to_sparse());
    for (const SparseMatrix& m : owned_) factors_.push_back(&m);
    n_ = seq.node_count();
}

void ProductOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y = x;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        scratch_ = **it * y;
        y.swap(scratch_);
    }
}

void ProductOperator::apply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y = x;
    for (const SparseMatrix* f : factors_) {
        scratch_ = f->transpose() * y;
        y.swap(scratch_);
    }
}

namespace {

constexpr double kBreakdown = 1e-14;

void check_finite(const Eigen::VectorXd& v) {
    if (!v.allFinite())
        throw NumericalError(
            "operator application produced non-finite values; "
            "consider normalizing the input weights");
}

// Two-pass classical Gram-Schmidt against the first `cols` columns of Q.
void reorthogonalize(const Eigen::MatrixXd& Q, int cols, Eigen::VectorXd& v) {
    if (cols == 0) return;
    const auto basis = Q.leftCols(cols);
    v.noalias() -= basis * (basis.transpose() * v);
    v.noalias() -= basis * (basis.transpose() * v);
}

// Random unit vector orthogonal to the first `cols` columns of Q, or a zero
// vector if the basis already spans the space.
bool fresh_direction(const Eigen::MatrixXd& Q, int cols, std::mt19937_64& rng,
                     Eigen::VectorXd& out) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 5; ++attempt) {
        for (int i = 0; i < out.size(); ++i) out[i] = gauss(rng);
        reorthogonalize(Q, cols, out);
        const double nrm = out.norm();
        if (nrm > 1e-8) {
            out /= nrm;
            return true;
        }
    }
    out.setZero();
    return false;
}

// Largest-magnitude entry of u must be nonnegative; ties resolved toward the
// smallest index. u and v are flipped jointly.
void normalize_sign(Eigen::Ref<Eigen::VectorXd> u, Eigen::Ref<Eigen::VectorXd> v) {
    int idx = 0;
    double best = -1.0;
    for (int i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        if (a > best) {
            best = a;
            idx = i;
        }
    }
    if (u[idx] < 0.0) {
        u = -u;
        v = -v;
    }
}

}  // namespace

SvdFactors truncated_svd(const LinearOperator& op, int rank, const SvdOptions& opts) {
    const int n_rows = op.rows();
    const int n_cols = op.cols();
    const int n_min = std::min(n_rows, n_cols);
    if (rank < 1) throw DataError("truncated_svd: rank must be >= 1");
    if (rank > n_min)
        throw DataError("truncated_svd: rank " + std::to_string(rank) + " exceeds dimension " +
                        std::to_string(n_min));
    if (!(opts.tol > 0.0)) throw DataError("truncated_svd: tol must be > 0");

    const int k_want = std::min(rank + 1, n_min);  // extra triple for the gap estimate
    const int w = std::min(n_min, std::max({2 * k_want + 6, 12, opts.subspace}));
    const int max_restarts = opts.max_restarts > 0 ? opts.max_restarts : 50 * rank;

    std::mt19937_64 rng(opts.seed);
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(n_rows, w);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n_cols, w + 1);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(w, w);
    Eigen::VectorXd t(std::max(n_rows, n_cols)), tr(n_rows), tc(n_cols);

    // bootstrap: random unit v_0, u_0 = X v_0 / alpha
    fresh_direction(V, 0, rng, tc);
    V.col(0) = tc;
    op.apply(V.col(0), tr);
    check_finite(tr);
    {
        const double a = tr.norm();
        if (a > kBreakdown) {
            U.col(0) = tr / a;
            B(0, 0) = a;
        } else {
            fresh_direction(U, 0, rng, tr);
            U.col(0) = tr;
            B(0, 0) = 0.0;
        }
    }

    int fresh_cols = 0;  // basis columns already present when expansion starts
    double sigma_scale = 1.0;
    double beta_last = 0.0;
    double achieved = std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<Eigen::MatrixXd> small_svd;

    for (int restart = 0; restart <= max_restarts; ++restart) {
        // expand the bidiagonalization to the full working dimension
        for (int j = fresh_cols; j < w - 1; ++j) {
            op.apply_transpose(U.col(j), tc);
            check_finite(tc);
            reorthogonalize(V, j + 1, tc);
            double b = tc.norm();
            if (b > kBreakdown * sigma_scale) {
                V.col(j + 1) = tc / b;
            } else {
                b = 0.0;
                fresh_direction(V, j + 1, rng, tc);
                V.col(j + 1) = tc;
            }
            B(j, j + 1) = b;

            op.apply(V.col(j + 1), tr);
            check_finite(tr);
            reorthogonalize(U, j + 1, tr);
            double a = tr.norm();
            if (a > kBreakdown * sigma_scale) {
                U.col(j + 1) = tr / a;
            } else {
                a = 0.0;
                fresh_direction(U, j + 1, rng, tr);
                U.col(j + 1) = tr;
            }
            B(j + 1, j + 1) = a;
        }
        // residual coupling vector v_w
        op.apply_transpose(U.col(w - 1), tc);
        check_finite(tc);
        reorthogonalize(V, w, tc);
        beta_last = tc.norm();
        if (beta_last > kBreakdown * sigma_scale) {
            V.col(w) = tc / beta_last;
        } else {
            beta_last = 0.0;
            fresh_direction(V, w, rng, tc);
            V.col(w) = tc;
        }

        small_svd.compute(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd& sig = small_svd.singularValues();
        sigma_scale = std::max(sig[0], 1.0);

        // Ritz residual on the X^T side is |beta_last * P(w-1, i)|; the X side
        // is exact by construction.
        const double tol_abs = opts.tol * sig[0];
        achieved = 0.0;
        bool converged = true;
        for (int i = 0; i < k_want; ++i) {
            const double res = std::abs(beta_last * small_svd.matrixU()(w - 1, i));
            achieved = std::max(achieved, res);
            if (res > tol_abs) converged = false;
        }
        if (sig[0] == 0.0) converged = true;

        if (converged || restart == max_restarts) {
            if (!converged) {
                std::ostringstream msg;
                msg << "truncated_svd: no convergence within " << max_restarts
                    << " restarted cycles (achieved residual " << achieved << ", required "
                    << tol_abs << ")";
                throw NumericalError(msg.str());
            }
            SvdFactors out;
            out.rank = rank;
            out.singular_values = sig.head(rank);
            out.left_vectors = U * small_svd.matrixU().leftCols(rank);
            out.right_vectors = V.leftCols(w) * small_svd.matrixV().leftCols(rank);
            for (int k = 0; k < rank; ++k)
                normalize_sign(out.left_vectors.col(k), out.right_vectors.col(k));
            const double next = rank < n_min ? sig[std::min(rank, w - 1)] : 0.0;
            out.gap = std::max(out.singular_values[rank - 1] - next, 0.0);
            out.degenerate_gap = out.gap < 1e-10;
            out.residual = sig[0] > 0.0 ? achieved / sig[0] : 0.0;
            return out;
        }

        // thick restart: keep the leading Ritz triples plus the coupling vector
        const int keep = std::min(k_want + 4, w - 2);
        const Eigen::MatrixXd Uk = U * small_svd.matrixU().leftCols(keep);
        const Eigen::MatrixXd Vk = V.leftCols(w) * small_svd.matrixV().leftCols(keep);
        const Eigen::VectorXd rho =
            beta_last * small_svd.matrixU().row(w - 1).head(keep).transpose();
        const Eigen::VectorXd vnext = V.col(w);
        U.leftCols(keep) = Uk;
        V.leftCols(keep) = Vk;
        V.col(keep) = vnext;
        B.setZero();
        for (int i = 0; i < keep; ++i) {
            B(i, i) = sig[i];
            B(i, keep) = rho[i];
        }
        op.apply(V.col(keep), tr);
        check_finite(tr);
        reorthogonalize(U, keep, tr);
        double a = tr.norm();
        if (a > kBreakdown * sigma_scale) {
            U.col(keep) = tr / a;
        } else {
            a = 0.0;
            fresh_direction(U, keep, rng, tr);
            U.col(keep) = tr;
        }
        B(keep, keep) = a;
        fresh_cols = keep;
    }
    throw NumericalError("truncated_svd: unreachable");
}

double objective(const LinearOperator& op, int rank, const SvdOptions& opts) {
    return truncated_svd(op, rank, opts).objective();
}

}  // namespace netshrink
