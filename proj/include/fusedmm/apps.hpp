#ifndef FUSEDMM_APPS_HPP
#define FUSEDMM_APPS_HPP

#include <stdexcept>

#include "fusedmm/kernel.hpp"
#include "fusedmm/ops.hpp"

namespace fusedmm {

enum class App { FR_LAYOUT, NODE_EMBED_SIGMOID, GCN_FORWARD, GNN_MLP };

template <typename T>
struct AppParams {
    T alpha = T(1);  // SCAL factor for the FR layout step
    // required for GNN_MLP; must be pure and thread-safe
    std::function<void(std::span<const T>, std::span<const T>, std::span<T>)>
        mlp_vop;
};

// Five-slot configurations for the four shipped applications.
template <typename T>
OpSpec<T> make_spec(App app, const AppParams<T>& params = {}) {
    OpSpec<T> spec;
    switch (app) {
        case App::FR_LAYOUT:
            spec = {Vop::ADD, Rop::NORM, Sop::SCAL, Mop::MUL, Aop::ASUM};
            spec.alpha = params.alpha;
            break;
        case App::NODE_EMBED_SIGMOID:
            spec = {Vop::MUL, Rop::RSUM, Sop::SIGMOID, Mop::MUL, Aop::ASUM};
            break;
        case App::GCN_FORWARD:
            spec = {Vop::SEL2ND, Rop::NOOP, Sop::NOOP, Mop::MUL, Aop::ASUM};
            break;
        case App::GNN_MLP:
            if (!params.mlp_vop)
                throw std::invalid_argument(
                    "make_spec: GNN_MLP needs a user-provided MLP function");
            spec = {Vop::USER, Rop::NOOP, Sop::SIGMOID, Mop::MUL, Aop::AMAX};
            spec.user_vop = params.mlp_vop;
            break;
    }
    return spec;
}

// FR variant with coordinate differences (VOP=SUB) for force-style layouts.
// Not the shipped FR default, which uses ADD.
template <typename T>
OpSpec<T> fr_layout_sub_spec(T alpha) {
    OpSpec<T> spec{Vop::SUB, Rop::NORM, Sop::SCAL, Mop::MUL, Aop::ASUM};
    spec.alpha = alpha;
    return spec;
}

// Toy single-layer MLP hook for exercising the user-function path:
// out[j] = sigmoid(w_x*x[j] + w_y*y[j] + bias).
template <typename T>
auto make_toy_mlp_vop(T w_x, T w_y, T bias) {
    return [=](std::span<const T> x, std::span<const T> y, std::span<T> out) {
        for (std::size_t j = 0; j < x.size(); ++j)
            out[j] = sigmoid(w_x * x[j] + w_y * y[j] + bias);
    };
}

// Z[u,:] = sum over neighbors of sigmoid(x_u . y_v) * y_v
template <typename T>
DenseMatrix<T> embedding_step(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                              const DenseMatrix<T>& Y, int t) {
    return fused_mm(A, X, Y, make_spec<T>(App::NODE_EMBED_SIGMOID), t);
}

// per edge: h = alpha * ||x_u + y_v||, w = h * y_v, summed
template <typename T>
DenseMatrix<T> fr_layout_step(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                              const DenseMatrix<T>& Y, T alpha, int t) {
    AppParams<T> p;
    p.alpha = alpha;
    return fused_mm(A, X, Y, make_spec<T>(App::FR_LAYOUT, p), t);
}

// Z = A x Y (X is ignored by SEL2ND but keeps the kernel signature uniform)
template <typename T>
DenseMatrix<T> gcn_forward(const CsrMatrix<T>& A, const DenseMatrix<T>& Y,
                           int t) {
    DenseMatrix<T> X(A.nrows, Y.dim);
    return fused_mm(A, X, Y, make_spec<T>(App::GCN_FORWARD), t);
}

}  // namespace fusedmm

#endif  // FUSEDMM_APPS_HPP
