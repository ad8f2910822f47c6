#include "latticeqfi/bessel.hpp"

#include <cmath>
#include <cstdlib>

#include "latticeqfi/errors.hpp"

namespace latticeqfi {

std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) throw DomainError("Bessel order must be non-negative");
  if (!std::isfinite(x)) throw DomainError("Bessel argument must be finite");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double ax = std::abs(x);

  // Start far enough above both the requested order and |x| that the
  // minimal solution dominates by the time the recurrence reaches them.
  const double reach = std::max<double>(max_order, ax);
  int start = static_cast<int>(reach + 30.0 + 3.0 * std::sqrt(40.0 * reach));
  if (start % 2) ++start;

  std::vector<double> seq(static_cast<std::size_t>(start) + 2, 0.0);
  seq[static_cast<std::size_t>(start) + 1] = 0.0;
  seq[static_cast<std::size_t>(start)] = 1e-30;
  for (int k = start; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    seq[uk - 1] = (2.0 * k / ax) * seq[uk] - seq[uk + 1];
    if (std::abs(seq[uk - 1]) > 1e250) {
      for (std::size_t i = uk - 1; i < seq.size(); ++i) seq[i] *= 1e-250;
    }
  }
  double norm = seq[0];
  for (std::size_t k = 2; k < seq.size(); k += 2) norm += 2.0 * seq[k];
  for (int n = 0; n <= max_order; ++n) {
    double v = seq[static_cast<std::size_t>(n)] / norm;
    if (x < 0.0 && (n % 2)) v = -v;
    out[static_cast<std::size_t>(n)] = v;
  }
  return out;
}

double bessel_j(int order, double x) {
  const int n = std::abs(order);
  const double v = bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
  return (order < 0 && (n % 2)) ? -v : v;
}

double bessel_j_derivative(int order, double x) {
  return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x));
}

}  // namespace latticeqfi
