#include "hsball/pick.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsball/rng.hpp"

namespace hsball {

namespace {

Eigen::MatrixXcd model_gram(const PointSeq& seq) {
  const int N = static_cast<int>(seq.size());
  const double rho = seq.params.rho();
  Eigen::MatrixXcd G(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const Complex ip = herm_inner(seq.points[i], seq.points[j]);
      G(i, j) = std::pow(Complex(1.0) - ip, -rho);
    }
  }
  return G;
}

Eigen::MatrixXcd pick_matrix(const Eigen::MatrixXcd& G,
                             const Eigen::VectorXcd& values, double t) {
  const int N = static_cast<int>(G.rows());
  Eigen::MatrixXcd M(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      M(i, j) = (t * t - values(i) * std::conj(values(j))) * G(i, j);
    }
  }
  return M;
}

double min_eig(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  return es.eigenvalues().minCoeff();
}

bool psd(const Eigen::MatrixXcd& M) {
  const double scale = std::max(1e-300, M.cwiseAbs().maxCoeff());
  return min_eig(M) >= -1e-10 * scale;
}

// Inverse power series of q in the quotient ring; needs |q(0)| bounded away
// from zero.  q = q0 (1 - u) with u of valuation >= 1, so the geometric sum
// terminates at the cap exactly.
PolyFn inverse_series(const PolyFn& q, Complex q0) {
  const int cap = q.cap();
  PolyFn u = PolyFn::constant(q.n(), cap, 1.0).sub(q.scale(1.0 / q0));
  PolyFn geom = PolyFn::constant(q.n(), cap, 1.0);
  PolyFn uPow = PolyFn::constant(q.n(), cap, 1.0);
  for (int k = 1; k <= cap; ++k) {
    uPow = uPow.mul(u);
    geom = geom.add(uPow);
  }
  return geom.scale(1.0 / q0);
}

}  // namespace

MinNormInterpolant min_norm_interpolant(const PointSeq& seq,
                                        const Eigen::VectorXcd& values,
                                        KernelConvention convention,
                                        int degreeCap) {
  const int N = static_cast<int>(seq.size());
  if (values.size() != N) {
    fail(ErrorKind::InvalidParams, "values length does not match points");
  }
  const GramMatrix G = gram(seq, convention, degreeCap);
  const Eigen::VectorXcd c = G.entries.ldlt().solve(values);
  std::vector<PolyFn> kernels;
  kernels.reserve(N);
  for (int i = 0; i < N; ++i) {
    kernels.push_back(
        kernel(seq.points[i], seq.params, convention, degreeCap).truncation);
  }
  PolyFn g = PolyFn::zero(seq.params.n, degreeCap);
  for (int i = 0; i < N; ++i) g = g.add(kernels[i].scale(c(i)));
  MinNormInterpolant out{std::move(g), c, 0.0, 0.0};
  out.norm2 = std::max(0.0, (values.adjoint() * c)(0, 0).real());

  // The ideal-Gram coefficients leave a truncation-tail mismatch at the
  // nodes (the Model Gram is the untruncated closed form).  Re-solving the
  // mismatch against the evaluation matrix of the truncated kernels pins the
  // nodal values to machine precision without touching the norm certificate.
  Eigen::VectorXcd residual(N);
  auto fill_residual = [&]() {
    double maxResid = 0.0;
    for (int i = 0; i < N; ++i) {
      residual(i) = values(i) - out.g.eval(seq.points[i]);
      maxResid = std::max(maxResid, std::abs(residual(i)));
    }
    return maxResid;
  };
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (fill_residual() > 1e-14 * scale) {
    Eigen::MatrixXcd E(N, N);
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        E(i, j) = kernels[j].eval(seq.points[i]);
      }
    }
    const Eigen::VectorXcd d = E.colPivHouseholderQr().solve(residual);
    for (int j = 0; j < N; ++j) out.g = out.g.add(kernels[j].scale(d(j)));
  }
  out.maxResidual = fill_residual();
  return out;
}

PickResult pick_min_norm(const PointSeq& seq, const Eigen::VectorXcd& values,
                         const SpaceParams& params) {
  if (params.p != 2.0) {
    fail(ErrorKind::InvalidParams, "Pick feasibility needs p = 2");
  }
  if (params.rho() > 1.0 + 1e-12) {
    fail(ErrorKind::InvalidParams,
         "complete-Pick regime needs rho = n - 2s <= 1");
  }
  const int N = static_cast<int>(seq.size());
  if (values.size() != N || N == 0) {
    fail(ErrorKind::InvalidParams, "values length does not match points");
  }
  const Eigen::MatrixXcd G = model_gram(seq);
  PickResult result;
  auto probe = [&](double t) {
    const bool ok = psd(pick_matrix(G, values, t));
    result.trace.emplace_back(t, ok);
    return ok;
  };
  const double maxAbs = values.cwiseAbs().maxCoeff();
  if (maxAbs == 0.0) {
    result.tMin = 0.0;
    result.certificateEig = min_eig(pick_matrix(G, values, 0.0));
    return result;
  }
  double lo = 0.0;
  double hi = 2.0 * maxAbs + 1.0;
  int grow = 0;
  while (!probe(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) {
      fail(ErrorKind::BisectionNoConverge, "no feasible t found");
    }
  }
  int iters = 0;
  while (hi - lo > 1e-10 && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++iters;
  }
  if (hi - lo > 1e-8) {
    fail(ErrorKind::BisectionNoConverge,
         "bracket width above 1e-8 after 200 iterations");
  }
  result.tMin = hi;
  result.certificateEig = min_eig(pick_matrix(G, values, hi));
  return result;
}

PickFunctionResult pick_extremal_function(const PointSeq& seq,
                                          const Eigen::VectorXcd& values,
                                          const SpaceParams& params,
                                          int degreeCap) {
  PickFunctionResult out;
  out.pick = pick_min_norm(seq, values, params);
  const int N = static_cast<int>(seq.size());
  const double t = out.pick.tMin;
  const Eigen::MatrixXcd G = model_gram(seq);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      pick_matrix(G, values, t));
  const Eigen::VectorXcd nu = es.eigenvectors().col(0);

  PolyFn numer = PolyFn::zero(params.n, degreeCap);
  PolyFn denom = PolyFn::zero(params.n, degreeCap);
  for (int i = 0; i < N; ++i) {
    const PolyFn k =
        kernel(seq.points[i], params, KernelConvention::Model, degreeCap)
            .truncation;
    numer = numer.add(k.scale(nu(i)));
    denom = denom.add(k.scale(nu(i) * std::conj(values(i))));
  }
  const Complex q0 = denom.coeff(MultiIndex(params.n, 0));
  if (std::abs(q0) > 1e-8 * std::max(1.0, denom.max_abs_coeff())) {
    out.m = numer.scale(t * t).mul(inverse_series(denom, q0));
    out.quotientPath = true;
  } else {
    out.m = min_norm_interpolant(seq, values, KernelConvention::Model,
                                 degreeCap)
                .g;
    out.quotientPath = false;
  }
  // Kernel-span correction pins the nodal values regardless of the path.
  Eigen::VectorXcd residual(N);
  for (int i = 0; i < N; ++i) {
    residual(i) = values(i) - out.m.eval(seq.points[i]);
  }
  if (residual.cwiseAbs().maxCoeff() > 1e-14) {
    const MinNormInterpolant fix = min_norm_interpolant(
        seq, residual, KernelConvention::Model, degreeCap);
    out.m = out.m.add(fix.g);
  }
  for (int i = 0; i < N; ++i) {
    out.maxResidual = std::max(
        out.maxResidual, std::abs(out.m.eval(seq.points[i]) - values(i)));
  }
  return out;
}

MultiplierEstimate multiplier_norm_estimate(const PolyFn& m,
                                            const SpaceParams& params,
                                            int degreeCap,
                                            const QuadratureSpec& quad,
                                            uint64_t familySeed) {
  if (m.n() != params.n) {
    fail(ErrorKind::InvalidParams, "multiplier dimension mismatch");
  }
  MultiplierEstimate est;
  est.degreeCap = degreeCap;
  const std::vector<MultiIndex> basis =
      all_multi_indices(params.n, degreeCap);
  const int B = static_cast<int>(basis.size());

  if (params.p == 2.0) {
    std::vector<double> sqrtW(B);
    for (int i = 0; i < B; ++i) {
      sqrtW[i] = std::sqrt(hs2_weight(basis[i], params));
    }
    std::map<MultiIndex, int, GradedLexLess> pos;
    for (int i = 0; i < B; ++i) pos[basis[i]] = i;
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(B, B);
    MultiIndex target(params.n);
    for (int a = 0; a < B; ++a) {
      const int da = mi_degree(basis[a]);
      for (const auto& [gamma, c] : m.terms()) {
        if (da + mi_degree(gamma) > degreeCap) continue;
        for (int t = 0; t < params.n; ++t) {
          target[t] = basis[a][t] + gamma[t];
        }
        T(pos.at(target), a) += c;
      }
    }
    for (int b = 0; b < B; ++b) {
      for (int a = 0; a < B; ++a) {
        if (T(b, a) != Complex(0.0)) T(b, a) *= sqrtW[b] / sqrtW[a];
      }
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(T);
    est.galerkinUpper = svd.singularValues().maxCoeff();
  } else {
    est.galerkinUpper = std::numeric_limits<double>::quiet_NaN();
  }

  auto norm = [&](const PolyFn& f) -> double {
    if (params.p == 2.0) {
      return std::sqrt(std::abs(hs2_inner(f, f, params)));
    }
    return hsp_norm(f, params, quad, NormFlavor::FractionalShift).value;
  };
  auto ratio = [&](const PolyFn& f) {
    const double nf = norm(f);
    if (nf < 1e-14) return;
    est.samplingLower = std::max(est.samplingLower, norm(f.mul(m)) / nf);
  };

  // Monomials, seeded random polynomials, truncated kernels: the documented
  // witness family for the lower bound.
  for (const MultiIndex& alpha : basis) {
    ratio(PolyFn::monomial(params.n, degreeCap, alpha, 1.0));
  }
  Rng rng(familySeed);
  const std::vector<MultiIndex> half =
      all_multi_indices(params.n, std::max(1, degreeCap / 2));
  for (int trial = 0; trial < 8; ++trial) {
    PolyFn f = PolyFn::zero(params.n, degreeCap);
    for (const MultiIndex& alpha : half) {
      f.set_coeff(alpha, rng.complex_normal());
    }
    ratio(f);
  }
  for (int trial = 0; trial < 4; ++trial) {
    const Point a = ball_point(rng, params.n, 0.6);
    ratio(kernel(a, params, KernelConvention::Exact, degreeCap).truncation);
  }
  return est;
}

double adjoint_eigen_residual(const PolyFn& m, const Point& a,
                              const SpaceParams& params, int degreeCap) {
  if (params.p != 2.0) {
    fail(ErrorKind::InvalidParams, "adjoint model needs p = 2");
  }
  const std::vector<MultiIndex> basis =
      all_multi_indices(params.n, degreeCap);
  const int B = static_cast<int>(basis.size());
  std::map<MultiIndex, int, GradedLexLess> pos;
  std::vector<double> sqrtW(B);
  for (int i = 0; i < B; ++i) {
    pos[basis[i]] = i;
    sqrtW[i] = std::sqrt(hs2_weight(basis[i], params));
  }
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(B, B);
  MultiIndex target(params.n);
  for (int col = 0; col < B; ++col) {
    const int dc = mi_degree(basis[col]);
    for (const auto& [gamma, c] : m.terms()) {
      if (dc + mi_degree(gamma) > degreeCap) continue;
      for (int t = 0; t < params.n; ++t) target[t] = basis[col][t] + gamma[t];
      T(pos.at(target), col) += c * sqrtW[pos.at(target)] / sqrtW[col];
    }
  }
  const PolyFn k =
      kernel(a, params, KernelConvention::Exact, degreeCap).truncation;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(B);
  for (const auto& [alpha, c] : k.terms()) {
    v(pos.at(alpha)) = c * sqrtW[pos.at(alpha)];
  }
  const Complex ma = std::conj(m.eval(a));
  const Eigen::VectorXcd lhs = T.adjoint() * v;
  return (lhs - ma * v).norm() / v.norm();
}

}  // namespace hsball
