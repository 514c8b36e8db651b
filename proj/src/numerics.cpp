#include "hzeta/numerics.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multifit.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_zeta.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "hzeta/errors.hpp"

namespace hzeta {

namespace {

// GSL's default handler aborts; errors are reported through status codes.
struct HandlerGuard {
  HandlerGuard() { gsl_set_error_handler_off(); }
};
const HandlerGuard handler_guard;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params) {
  const auto* f = static_cast<const std::function<double(double)>*>(params);
  return (*f)(x);
}

}  // namespace

double zeta(double s) {
  if (!(s > 1)) throw DomainError("zeta evaluated at s <= 1");
  gsl_sf_result res;
  int status = gsl_sf_zeta_e(s, &res);
  if (status != GSL_SUCCESS) throw NumericalError(std::string("zeta: ") + gsl_strerror(status));
  return res.val;
}

std::complex<double> log_gamma(std::complex<double> z) {
  gsl_sf_result lnr, arg;
  int status = gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
  if (status != GSL_SUCCESS) throw NumericalError(std::string("log_gamma: ") + gsl_strerror(status));
  return {lnr.val, arg.val};
}

Quadrature integrate(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opts) {
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> w(
      gsl_integration_workspace_alloc(static_cast<size_t>(opts.limit)));
  long evals = 0;
  std::function<double(double)> counted = [&](double x) {
    ++evals;
    return f(x);
  };
  gsl_function gf;
  gf.function = &trampoline;
  gf.params = &counted;
  double result = 0, err = 0;
  int status = opts.singular
                   ? gsl_integration_qags(&gf, a, b, opts.abs_tol, opts.rel_tol, static_cast<size_t>(opts.limit),
                                          w.get(), &result, &err)
                   : gsl_integration_qag(&gf, a, b, opts.abs_tol, opts.rel_tol, static_cast<size_t>(opts.limit),
                                         GSL_INTEG_GAUSS21, w.get(), &result, &err);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw NumericalError("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                         "] failed: " + gsl_strerror(status) + " (estimate " + std::to_string(result) +
                         ", error " + std::to_string(err) + ")");
  return Quadrature{result, err, evals};
}

Quadrature integrate_pieces(const std::function<double(double)>& f, const std::vector<double>& points,
                            const QuadratureOptions& opts) {
  Quadrature total;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    Quadrature q = integrate(f, points[i], points[i + 1], opts);
    total.value += q.value;
    total.abs_error += q.abs_error;
    total.evaluations += q.evaluations;
  }
  return total;
}

LinearFit least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
                        const std::vector<double>& weights) {
  const size_t n = rows.size();
  if (n == 0 || y.size() != n || weights.size() != n) throw PreconditionError("least_squares: size mismatch");
  const size_t m = rows[0].size();
  if (n < m) throw NumericalError("least_squares: fewer observations than unknowns");
  gsl_matrix* X = gsl_matrix_alloc(n, m);
  gsl_vector* Y = gsl_vector_alloc(n);
  gsl_vector* W = gsl_vector_alloc(n);
  gsl_vector* C = gsl_vector_alloc(m);
  gsl_matrix* cov = gsl_matrix_alloc(m, m);
  gsl_multifit_linear_workspace* work = gsl_multifit_linear_alloc(n, m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) gsl_matrix_set(X, i, j, rows[i][j]);
    gsl_vector_set(Y, i, y[i]);
    gsl_vector_set(W, i, weights[i]);
  }
  double chisq = 0;
  int status = gsl_multifit_wlinear(X, W, Y, C, cov, &chisq, work);
  LinearFit fit;
  if (status == GSL_SUCCESS) {
    fit.coefficients.resize(m);
    for (size_t j = 0; j < m; ++j) fit.coefficients[j] = gsl_vector_get(C, j);
    fit.residual = std::sqrt(chisq / static_cast<double>(n));
    fit.condition = 1.0 / gsl_multifit_linear_rcond(work);
  }
  gsl_multifit_linear_free(work);
  gsl_matrix_free(cov);
  gsl_vector_free(C);
  gsl_vector_free(W);
  gsl_vector_free(Y);
  gsl_matrix_free(X);
  if (status != GSL_SUCCESS) throw NumericalError(std::string("least_squares: ") + gsl_strerror(status));
  return fit;
}

}  // namespace hzeta
