#include "hsball/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "hsball/rng.hpp"

namespace hsball {

namespace {

double rising(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x + i;
  return out;
}

Complex conj_power(const Point& a, const MultiIndex& alpha) {
  Complex out = 1.0;
  for (size_t t = 0; t < a.z.size(); ++t) {
    const Complex base = std::conj(a.z[t]);
    for (int e = 0; e < alpha[t]; ++e) out *= base;
  }
  return out;
}

double alpha_factorial(const MultiIndex& alpha) {
  double out = 1.0;
  for (int a : alpha) out *= factorial(a);
  return out;
}

}  // namespace

KernelFn kernel(const Point& center, const SpaceParams& params,
                KernelConvention convention, int degreeCap) {
  if (center.n() != params.n) {
    fail(ErrorKind::InvalidParams, "kernel center dimension mismatch");
  }
  if (degreeCap < 0) fail(ErrorKind::InvalidParams, "degreeCap must be >= 0");
  const double rho = params.rho();
  if (convention == KernelConvention::Model && std::abs(rho) < 1e-12) {
    fail(ErrorKind::LogKernelCase, "model kernel undefined at rho = 0");
  }
  PolyFn f(params.n, degreeCap);
  for (const MultiIndex& alpha : all_multi_indices(params.n, degreeCap)) {
    const Complex aPow = conj_power(center, alpha);
    if (aPow == Complex(0.0)) continue;
    Complex c;
    if (convention == KernelConvention::Model) {
      c = rising(rho, mi_degree(alpha)) / alpha_factorial(alpha) * aPow;
    } else {
      c = aPow / hs2_weight(alpha, params);
    }
    f.set_coeff(alpha, c);
  }
  // The series has infinitely many nonzero coefficients unless the center
  // is 0, so the realization is marked as a truncation.
  if (center.norm2() > 0.0) f.set_truncated(true);
  return KernelFn{center, params, convention, std::move(f)};
}

double kernel_norm_proxy(const Point& center, const SpaceParams& params,
                         double q) {
  if (center.n() != params.n) {
    fail(ErrorKind::InvalidParams, "proxy center dimension mismatch");
  }
  return std::pow(1.0 - center.norm2(), params.kernelExp(q));
}

GramMatrix gram(const PointSeq& seq, KernelConvention convention,
                int degreeCap) {
  const int N = static_cast<int>(seq.size());
  if (N == 0) fail(ErrorKind::InvalidParams, "gram needs at least one point");
  const double rho = seq.params.rho();
  Eigen::MatrixXcd G(N, N);
  if (convention == KernelConvention::Model) {
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const Complex ip = herm_inner(seq.points[i], seq.points[j]);
        G(i, j) = std::pow(Complex(1.0) - ip, -rho);
      }
    }
  } else {
    std::vector<KernelFn> kernels;
    kernels.reserve(N);
    for (int i = 0; i < N; ++i) {
      kernels.push_back(
          kernel(seq.points[i], seq.params, convention, degreeCap));
    }
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        G(i, j) = hs2_inner(kernels[j].truncation, kernels[i].truncation,
                            seq.params);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  const double maxEig = es.eigenvalues().maxCoeff();
  const double minEig = es.eigenvalues().minCoeff();
  if (!(minEig > 0.0) || maxEig / minEig > 1e12) {
    fail(ErrorKind::SingularGram,
         "Gram condition number above 1e12 (eigenvalue range [" +
             std::to_string(minEig) + ", " + std::to_string(maxEig) + "])");
  }
  return GramMatrix{std::move(G), convention, seq.params};
}

BoundaryPoint BoundaryPoint::make(std::vector<Complex> coords) {
  if (coords.empty()) fail(ErrorKind::InvalidParams, "empty boundary point");
  double norm2 = 0.0;
  for (const Complex& c : coords) norm2 += std::norm(c);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
    fail(ErrorKind::InvalidParams, "boundary point must have norm 1");
  }
  return BoundaryPoint{std::move(coords)};
}

namespace {

double box_mass(const PointSeq& seq, const BoundaryPoint& zeta, double h,
                double exponent) {
  double mass = 0.0;
  for (const Point& a : seq.points) {
    const Complex ip = herm_inner(a.z, zeta.z);
    if (std::abs(Complex(1.0) - ip) < h) {
      mass += std::pow(1.0 - a.norm2(), exponent);
    }
  }
  return mass;
}

BoundaryPoint radial_projection(const Point& a) {
  const double norm = a.norm();
  std::vector<Complex> coords(a.z.size(), 0.0);
  if (norm < 1e-14) {
    coords[0] = 1.0;
  } else {
    for (size_t t = 0; t < a.z.size(); ++t) coords[t] = a.z[t] / norm;
  }
  return BoundaryPoint{std::move(coords)};
}

}  // namespace

std::vector<BoxRecord> carleson_box_sweep(const PointSeq& seq, double exponent,
                                          const BoxStrategy& strategy) {
  std::vector<BoxRecord> records;
  auto consider = [&](BoundaryPoint zeta, double h) {
    const double mass = box_mass(seq, zeta, h, exponent);
    const double ratio = mass / std::pow(h, exponent);
    records.push_back(BoxRecord{PseudoBall{std::move(zeta), h}, mass, ratio});
  };
  for (const Point& a : seq.points) {
    const BoundaryPoint zeta = radial_projection(a);
    for (double c : strategy.pointRadiusFactors) {
      const double h = std::min(c * (1.0 - a.norm2()), 2.0);
      if (h > 0.0) consider(zeta, h);
    }
  }
  Rng rng(strategy.gridSeed);
  for (int g = 0; g < strategy.gridCount; ++g) {
    const std::vector<Complex> zeta = sphere_point(rng, seq.params.n);
    for (double h : strategy.gridRadii) {
      consider(BoundaryPoint{zeta}, h);
    }
  }
  return records;
}

CarlesonReport carleson_box_sup_exponent(const PointSeq& seq, double exponent,
                                         const BoxStrategy& strategy) {
  CarlesonReport report;
  report.exponent = exponent;
  report.exponentDegenerate = !(exponent > 0.0);
  for (BoxRecord& rec : carleson_box_sweep(seq, exponent, strategy)) {
    ++report.boxesTested;
    if (rec.ratio > report.supRatio) {
      report.supRatio = rec.ratio;
      report.argmaxBox = std::move(rec.box);
    }
  }
  return report;
}

CarlesonReport carleson_box_sup(const PointSeq& seq, const SpaceParams& params,
                                const BoxStrategy& strategy) {
  const double exponent = params.n - params.s * params.p;
  return carleson_box_sup_exponent(seq, exponent, strategy);
}

double pseudo_hyperbolic(const Point& a, const Point& b) {
  if (a.n() != b.n()) fail(ErrorKind::InvalidParams, "dimension mismatch");
  const Complex ip = herm_inner(b, a);
  const double denom = std::norm(Complex(1.0) - ip);
  const double oneMinus =
      (1.0 - a.norm2()) * (1.0 - b.norm2()) / denom;
  return std::sqrt(std::max(0.0, 1.0 - oneMinus));
}

SeparationStats separation_stats(const PointSeq& seq) {
  const int N = static_cast<int>(seq.size());
  if (N < 2) fail(ErrorKind::InvalidParams, "separation needs >= 2 points");
  SeparationStats stats;
  stats.pairMatrix = Eigen::MatrixXd::Zero(N, N);
  stats.minPseudoHyperbolic = 1.0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double d = pseudo_hyperbolic(seq.points[i], seq.points[j]);
      stats.pairMatrix(i, j) = d;
      stats.pairMatrix(j, i) = d;
      stats.minPseudoHyperbolic = std::min(stats.minPseudoHyperbolic, d);
    }
  }
  return stats;
}

Complex normalized_kernel_inner(const Point& a, const Point& b, double rho) {
  const Complex ip = herm_inner(b, a);
  const Complex gram = std::pow(Complex(1.0) - ip, -rho);
  const double scale =
      std::pow((1.0 - a.norm2()) * (1.0 - b.norm2()), rho / 2.0);
  return gram * scale;
}

RieszBounds riesz_bounds(const PointSeq& seq, const SpaceParams& params) {
  if (params.p != 2.0) {
    fail(ErrorKind::InvalidParams, "frame bounds need the Hilbert case p = 2");
  }
  const int N = static_cast<int>(seq.size());
  if (N == 0) fail(ErrorKind::InvalidParams, "frame bounds need points");
  const double rho = params.rho();
  Eigen::MatrixXcd G(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      // <e_{a_j}, e_{a_i}> placed at (i,j) keeps G Hermitian PSD.
      G(i, j) = normalized_kernel_inner(seq.points[j], seq.points[i], rho);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::SingularGram, "eigenvalue computation failed");
  }
  return RieszBounds{es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace hsball
