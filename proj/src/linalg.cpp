#include "linalg.hpp"

#include <lapacke.h>

#include <string>

#include "error.hpp"

namespace qst {

SymEig sym_eig(const Mat& a)
{
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.rows() != a.cols()) fail(ErrorCode::internal, "sym_eig: matrix not square");
    SymEig r;
    r.vectors = a;
    r.values.resize(n);
    if (n == 0) return r;
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, r.vectors.data(), n, r.values.data());
    if (info != 0) fail(ErrorCode::numerical, "dsyevd failed, info=" + std::to_string(info));
    return r;
}

void fix_signs(Mat& v, double tol)
{
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, j)) > tol) {
                if (v(i, j) < 0) v.col(j) *= -1.0;
                break;
            }
        }
    }
}

double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace qst
