#pragma once

#include <vector>

namespace latticeqfi {

/// J_0(x), ..., J_{max_order}(x), Bessel functions of the first kind of
/// integer order, by Miller's backward recurrence normalized with
/// J_0 + 2 sum_k J_2k = 1.
std::vector<double> bessel_j_sequence(int max_order, double x);

/// J_n(x) for any integer n (negative orders via J_{-n} = (-1)^n J_n).
double bessel_j(int order, double x);

/// dJ_n/dx = (J_{n-1} - J_{n+1}) / 2.
double bessel_j_derivative(int order, double x);

}  // namespace latticeqfi
