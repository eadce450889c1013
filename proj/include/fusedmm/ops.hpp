#ifndef FUSEDMM_OPS_HPP
#define FUSEDMM_OPS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>

namespace fusedmm {

// The five operator slots. A FusedMM instance is one choice per slot; USER
// routes to a function supplied in the OpSpec.
enum class Vop { ADD, MUL, SEL2ND, SUB, USER };
enum class Rop { NOOP, RSUM, RMUL, NORM, USER };
enum class Sop { NOOP, SIGMOID, SCAL, USER };
enum class Mop { MUL, SEL2ND, USER };
enum class Aop { ASUM, AMAX, USER };

enum class KnownPattern { SIGMOID_EMBED, SPMM_GCN, FR_LAYOUT, GENERIC };

template <typename T>
struct OpSpec {
    Vop vop = Vop::MUL;
    Rop rop = Rop::RSUM;
    Sop sop = Sop::NOOP;
    Mop mop = Mop::MUL;
    Aop aop = Aop::ASUM;
    T alpha = T(1);  // SCAL factor

    // User hooks must be pure and safe to call from multiple workers.
    std::function<void(std::span<const T> x, std::span<const T> y,
                       std::span<T> out)>
        user_vop;
    std::function<T(std::span<const T>)> user_rop;
    // User SOPs may read the edge value; the predefined ones ignore it.
    std::function<T(T s, T edge_value)> user_sop;
    // h has length 1 for scalar messages, length d otherwise.
    std::function<void(std::span<const T> h, std::span<const T> y, T edge_value,
                       std::span<T> out)>
        user_mop;
    std::function<void(std::span<T> acc, std::span<const T> w)> user_aop;

    // Message shape rule: scalar iff ROP is active.
    bool scalar_message() const { return rop != Rop::NOOP; }

    bool has_user_slot() const {
        return vop == Vop::USER || rop == Rop::USER || sop == Sop::USER ||
               mop == Mop::USER || aop == Aop::USER;
    }
};

template <typename T>
T sigmoid(T s) {
    return T(1) / (T(1) + std::exp(-s));
}

template <typename T>
void apply_vop(const OpSpec<T>& spec, std::span<const T> x,
               std::span<const T> y, std::span<T> out) {
    if (x.size() != y.size() || x.size() != out.size())
        throw std::invalid_argument("apply_vop: length mismatch");
    switch (spec.vop) {
        case Vop::ADD:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
            break;
        case Vop::MUL:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
            break;
        case Vop::SEL2ND:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = y[i];
            break;
        case Vop::SUB:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
            break;
        case Vop::USER:
            spec.user_vop(x, y, out);
            break;
    }
}

template <typename T>
T apply_rop(const OpSpec<T>& spec, std::span<const T> z) {
    switch (spec.rop) {
        case Rop::RSUM: {
            T s = T(0);
            for (T v : z) s += v;
            return s;
        }
        case Rop::RMUL: {
            T s = T(1);
            for (T v : z) s *= v;
            return s;
        }
        case Rop::NORM: {
            T s = T(0);
            for (T v : z) s += v * v;
            return std::sqrt(s);
        }
        case Rop::USER:
            return spec.user_rop(z);
        case Rop::NOOP:
            throw std::logic_error("apply_rop called with NOOP");
    }
    return T(0);
}

template <typename T>
T apply_sop(const OpSpec<T>& spec, T s, T edge_value = T(0)) {
    switch (spec.sop) {
        case Sop::NOOP:
            return s;
        case Sop::SIGMOID:
            return sigmoid(s);
        case Sop::SCAL:
            return spec.alpha * s;
        case Sop::USER:
            return spec.user_sop(s, edge_value);
    }
    return s;
}

template <typename T>
void apply_sop(const OpSpec<T>& spec, std::span<T> v, T edge_value = T(0)) {
    if (spec.sop == Sop::NOOP) return;
    for (T& s : v) s = apply_sop(spec, s, edge_value);
}

// MOP with a scalar message: h scales y; the edge value does not enter
// (it reaches scalar pipelines through SOP or user hooks).
template <typename T>
void apply_mop(const OpSpec<T>& spec, T h, std::span<const T> y, T edge_value,
               std::span<T> out) {
    switch (spec.mop) {
        case Mop::MUL:
            for (std::size_t i = 0; i < y.size(); ++i) out[i] = h * y[i];
            break;
        case Mop::SEL2ND:
            for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i];
            break;
        case Mop::USER: {
            spec.user_mop(std::span<const T>(&h, 1), y, edge_value, out);
            break;
        }
    }
}

// MOP with a vector message: the edge value scales h (SpMM/GCN semantics).
template <typename T>
void apply_mop(const OpSpec<T>& spec, std::span<const T> h,
               std::span<const T> y, T edge_value, std::span<T> out) {
    switch (spec.mop) {
        case Mop::MUL:
            for (std::size_t i = 0; i < h.size(); ++i)
                out[i] = edge_value * h[i];
            break;
        case Mop::SEL2ND:
            for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i];
            break;
        case Mop::USER:
            spec.user_mop(h, y, edge_value, out);
            break;
    }
}

template <typename T>
void apply_aop(const OpSpec<T>& spec, std::span<T> acc, std::span<const T> w) {
    if (acc.size() != w.size())
        throw std::invalid_argument("apply_aop: length mismatch");
    switch (spec.aop) {
        case Aop::ASUM:
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[i];
            break;
        case Aop::AMAX:
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] = std::max(acc[i], w[i]);
            break;
        case Aop::USER:
            spec.user_aop(acc, w);
            break;
    }
}

template <typename T>
T aop_identity(const OpSpec<T>& spec) {
    return spec.aop == Aop::AMAX ? -std::numeric_limits<T>::infinity() : T(0);
}

template <typename T>
KnownPattern pattern_of(const OpSpec<T>& spec) {
    if (spec.has_user_slot()) return KnownPattern::GENERIC;
    if (spec.vop == Vop::MUL && spec.rop == Rop::RSUM &&
        spec.sop == Sop::SIGMOID && spec.mop == Mop::MUL &&
        spec.aop == Aop::ASUM)
        return KnownPattern::SIGMOID_EMBED;
    if (spec.vop == Vop::SEL2ND && spec.rop == Rop::NOOP &&
        spec.sop == Sop::NOOP && spec.mop == Mop::MUL && spec.aop == Aop::ASUM)
        return KnownPattern::SPMM_GCN;
    if (spec.vop == Vop::ADD && spec.rop == Rop::NORM && spec.sop == Sop::SCAL &&
        spec.mop == Mop::MUL && spec.aop == Aop::ASUM)
        return KnownPattern::FR_LAYOUT;
    return KnownPattern::GENERIC;
}

}  // namespace fusedmm

#endif  // FUSEDMM_OPS_HPP
