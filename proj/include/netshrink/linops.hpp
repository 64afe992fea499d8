#ifndef NETSHRINK_LINOPS_HPP
#define NETSHRINK_LINOPS_HPP

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "netshrink/graph.hpp"

namespace netshrink {

// Abstract matrix action. Backing is a single sparse matrix or an ordered
// product of sparse matrices; products are applied factor by factor, never
// materialized.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual int rows() const = 0;
    virtual int cols() const = 0;
    virtual void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const = 0;            // y = X x
    virtual void apply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const = 0;  // y = X^T x
};

class SparseOperator final : public LinearOperator {
public:
    explicit SparseOperator(SparseMatrix m) : m_(std::move(m)) {}
    explicit SparseOperator(const WeightedGraph& g) : m_(g.to_sparse()) {}
    // Non-owning view; caller keeps `m` alive.
    explicit SparseOperator(const SparseMatrix* m) : view_(m) {}

    int rows() const override { return static_cast<int>(mat().rows()); }
    int cols() const override { return static_cast<int>(mat().cols()); }
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override { y = mat() * x; }
    void apply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override {
        y = mat().transpose() * x;
    }

private:
    const SparseMatrix& mat() const { return view_ ? *view_ : m_; }
    SparseMatrix m_;
    const SparseMatrix* view_ = nullptr;
};

// X = factors[0] * factors[1] * ... * factors[s-1] (application order is
// right to left). All factors must be square with equal dimension.
class ProductOperator final : public LinearOperator {
public:
    explicit ProductOperator(std::vector<const SparseMatrix*> factors);
    explicit ProductOperator(const GraphSequence& seq);

    int rows() const override { return n_; }
    int cols() const override { return n_; }
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override;
    void apply_transpose(const Eigen::VectorXd& x, Eigen::VectorXd& y) const override;

private:
    std::vector<SparseMatrix> owned_;
    std::vector<const SparseMatrix*> factors_;
    int n_ = 0;
    mutable Eigen::VectorXd scratch_;
};

}  // namespace netshrink

#endif
