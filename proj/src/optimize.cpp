#include "sketchpost/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "sketchpost/errors.hpp"

namespace sketchpost {

BrentResult brent_minimize(const std::function<double(double)>& f, double a,
                           double b, double x_tol, int max_iter) {
  if (!(a < b)) throw DomainError("bracket must satisfy a < b");
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  BrentResult out;
  for (int iter = 0; iter < max_iter; ++iter) {
    out.iterations = iter + 1;
    const double m = 0.5 * (a + b);
    const double tol1 = x_tol * std::abs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
      out.converged = true;
      break;
    }
    bool golden = true;
    if (std::abs(e) > tol1) {
      // Parabola through (x, w, v).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m ? b : a) - x;
      d = gold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  out.x = x;
  out.fx = fx;
  return out;
}

SimplexResult simplex_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step, double f_tol, int max_iter) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw DomainError("empty starting point");
  std::vector<std::vector<double>> pts(dim + 1, x0);
  std::vector<double> fval(dim + 1);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
  SimplexResult out;
  for (std::size_t i = 0; i <= dim; ++i) {
    fval[i] = f(pts[i]);
    ++out.evaluations;
  }
  auto order = [&]() {
    std::vector<std::size_t> idx(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fval[a] < fval[b]; });
    std::vector<std::vector<double>> p2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      p2[i] = pts[idx[i]];
      f2[i] = fval[idx[i]];
    }
    pts.swap(p2);
    fval.swap(f2);
  };
  auto combine = [&](const std::vector<double>& centroid,
                     const std::vector<double>& far, double coef) {
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      p[i] = centroid[i] + coef * (far[i] - centroid[i]);
    }
    return p;
  };
  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    if (std::abs(fval[dim] - fval[0]) <=
        f_tol * (std::abs(fval[0]) + std::abs(fval[dim])) + 1e-300) {
      out.converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d] / double(dim);
    }
    std::vector<double> refl = combine(centroid, pts[dim], -1.0);
    double f_refl = f(refl);
    ++out.evaluations;
    if (f_refl < fval[0]) {
      std::vector<double> expand = combine(centroid, pts[dim], -2.0);
      double f_exp = f(expand);
      ++out.evaluations;
      if (f_exp < f_refl) {
        pts[dim] = expand; fval[dim] = f_exp;
      } else {
        pts[dim] = refl; fval[dim] = f_refl;
      }
    } else if (f_refl < fval[dim - 1]) {
      pts[dim] = refl; fval[dim] = f_refl;
    } else {
      std::vector<double> contract = combine(centroid, pts[dim], 0.5);
      double f_con = f(contract);
      ++out.evaluations;
      if (f_con < fval[dim]) {
        pts[dim] = contract; fval[dim] = f_con;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t d = 0; d < dim; ++d) {
            pts[i][d] = pts[0][d] + 0.5 * (pts[i][d] - pts[0][d]);
          }
          fval[i] = f(pts[i]);
          ++out.evaluations;
        }
      }
    }
  }
  order();
  out.x = pts[0];
  out.fx = fval[0];
  return out;
}

}  // namespace sketchpost
