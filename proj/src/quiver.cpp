#include "dtflow/quiver.hpp"
#include "dtflow/errors.hpp"

#include <cassert>

namespace dtflow {

Int SkewForm::eval(const DimVec& a, const DimVec& b) const {
    assert(a.size() == m.rows && b.size() == m.rows);
    Int acc = 0;
    for (size_t i = 0; i < m.rows; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < m.cols; ++j) acc += m.at(i, j) * a[i] * b[j];
    }
    return acc;
}

SkewForm skew_form_from_quiver(const Quiver& q) {
    const IntMatrix& a = q.arrow_counts;
    if (a.rows != q.vertex_count || a.cols != q.vertex_count)
        throw InputError("arrow count matrix must be square of size vertex_count");
    IntMatrix w(a.rows, a.cols);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) {
            if (a.at(i, j) < 0) throw InputError("arrow counts must be nonnegative");
            w.at(i, j) = a.at(i, j) - a.at(j, i);
        }
    return SkewForm{std::move(w)};
}

SkewForm skew_form_from_matrix(const IntMatrix& m) {
    if (m.rows != m.cols) throw InputError("skew form must be square");
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) != -m.at(j, i))
                throw InputError("skew form must be antisymmetric");
    return SkewForm{m};
}

IntVec contract(const SkewForm& omega, const DimVec& gamma) {
    assert(gamma.size() == omega.dim());
    IntVec out(omega.dim(), Int(0));
    for (size_t j = 0; j < omega.dim(); ++j)
        for (size_t i = 0; i < omega.dim(); ++i)
            out[j] += omega.m.at(i, j) * gamma[i];
    return out;
}

Rat pair(const Covector& theta, const DimVec& gamma) {
    if (theta.size() != gamma.size()) throw InputError("pairing dimension mismatch");
    Rat acc = 0;
    for (size_t i = 0; i < theta.size(); ++i) acc += theta[i] * Rat(gamma[i]);
    return acc;
}

Rat pair(const RatVec& theta, const RatVec& gamma) {
    if (theta.size() != gamma.size()) throw InputError("pairing dimension mismatch");
    Rat acc = 0;
    for (size_t i = 0; i < theta.size(); ++i) acc += theta[i] * gamma[i];
    return acc;
}

Int pair(const IntVec& theta, const IntVec& gamma) {
    if (theta.size() != gamma.size()) throw InputError("pairing dimension mismatch");
    Int acc = 0;
    for (size_t i = 0; i < theta.size(); ++i) acc += theta[i] * gamma[i];
    return acc;
}

}  // namespace dtflow
