#include "binconv/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <string>

#include "binconv/errors.hpp"

namespace binconv {

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double rel_tol, unsigned max_depth) {
  QuadratureResult out;
  if (!(hi > lo)) {
    return out;
  }
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, max_depth, rel_tol, &out.error, &out.l1);
  return out;
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f,
                                  std::span<const double> cuts, double rel_tol,
                                  std::string_view what) {
  QuadratureResult total;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const auto piece = integrate(f, cuts[i - 1], cuts[i], rel_tol);
    total.value += piece.value;
    total.error += piece.error;
    total.l1 += piece.l1;
  }
  if (!std::isfinite(total.value)) {
    throw NumericalError(std::string(what) + ": quadrature produced a non-finite value");
  }
  const double scale = std::max(std::abs(total.value), total.l1);
  if (total.error > rel_tol * scale && total.error > 1e-300) {
    std::ostringstream os;
    os << what << ": quadrature did not converge (error estimate " << total.error
       << " vs scale " << scale << ")";
    throw NumericalError(os.str(), total.error);
  }
  return total;
}

}  // namespace binconv
