#pragma once

#include <vector>

#include "mae/expr.hpp"

namespace mae {

using Row = std::vector<Expr>;
using Mat = std::vector<Row>;

Mat identity(int n);
Mat matmul(const Mat& a, const Mat& b);
// Inverse by elimination over the rational-function field; throws on singular.
Mat inverse(const Mat& a);
Expr det(Mat a);
int rank(Mat a);
// Basis of {v : a v = 0}, one vector per free column.
std::vector<Row> nullspace(Mat a);

}  // namespace mae
