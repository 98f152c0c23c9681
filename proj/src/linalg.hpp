#pragma once

#include <Eigen/Dense>

namespace qst {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct SymEig {
    Vec values;    // ascending
    Mat vectors;   // columns
};

// Dense symmetric eigensolver (LAPACK divide and conquer). Only the lower
// triangle of a is read.
SymEig sym_eig(const Mat& a);

// Flip each column so its first component above tol in magnitude is positive.
void fix_signs(Mat& v, double tol = 1e-8);

double max_abs(const Mat& a);

}  // namespace qst
