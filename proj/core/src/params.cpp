#include "hsball/params.hpp"

#include <cmath>
#include <sstream>

namespace hsball {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams:
      return "InvalidParams";
    case ErrorKind::PointOutsideBall:
      return "PointOutsideBall";
    case ErrorKind::LogKernelCase:
      return "LogKernelCase";
    case ErrorKind::DegreeOverflow:
      return "DegreeOverflow";
    case ErrorKind::SingularGram:
      return "SingularGram";
    case ErrorKind::BisectionNoConverge:
      return "BisectionNoConverge";
    case ErrorKind::QuadratureUnderResolved:
      return "QuadratureUnderResolved";
  }
  return "UnknownError";
}

double conjugate_exponent(double q) {
  if (!(q >= 1.0)) {
    fail(ErrorKind::InvalidParams, "exponent must satisfy q >= 1");
  }
  if (q == 1.0) return kInfExponent;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

SpaceParams SpaceParams::make(int n, double s, double p,
                              bool override_sp_bound) {
  if (n < 1) fail(ErrorKind::InvalidParams, "dimension n must be >= 1");
  if (!(s >= 0.0)) fail(ErrorKind::InvalidParams, "smoothness s must be >= 0");
  if (!(p >= 1.0)) fail(ErrorKind::InvalidParams, "exponent p must be >= 1");
  if (std::abs(s - 0.5 * n) < 1e-12) {
    fail(ErrorKind::LogKernelCase,
         "s = n/2 is rejected: the model kernel degenerates");
  }
  SpaceParams params{n, s, p, override_sp_bound};
  if (params.spBoundViolated() && !override_sp_bound) {
    std::ostringstream msg;
    msg << "s = " << s << " exceeds n/p = " << (n / p)
        << "; set override_sp_bound to explore anyway";
    fail(ErrorKind::InvalidParams, msg.str());
  }
  return params;
}

double SpaceParams::kernelExp(double q) const {
  if (!(q >= 1.0)) fail(ErrorKind::InvalidParams, "exponent must be >= 1");
  const double invQ = std::isinf(q) ? 0.0 : 1.0 / q;
  return s - n * (1.0 - invQ);
}

Exponents derive_exponents(const SpaceParams& params) {
  // params is validated at construction; recheck the two derived gates so a
  // hand-built struct still errors cleanly.
  if (!(params.p >= 1.0)) {
    fail(ErrorKind::InvalidParams, "exponent p must be >= 1");
  }
  if (std::abs(params.s - 0.5 * params.n) < 1e-12) {
    fail(ErrorKind::LogKernelCase, "s = n/2 is rejected");
  }
  Exponents out;
  out.pPrime = params.pPrime();
  out.rho = params.rho();
  out.kernelNormExp_p = params.kernelExp(params.p);
  out.kernelNormExp_pPrime = params.kernelExp(out.pPrime);
  return out;
}

double sobolev_embedding_q(const SpaceParams& params) {
  const double invQ = 1.0 / params.p - params.s / params.n;
  if (invQ <= 0.0) {
    fail(ErrorKind::InvalidParams,
         "sp >= n: the embedding exponent is infinite or negative");
  }
  return 1.0 / invQ;
}

Point Point::make(std::vector<Complex> coords) {
  Point pt{std::move(coords)};
  if (pt.z.empty()) {
    fail(ErrorKind::InvalidParams, "point needs at least one coordinate");
  }
  if (!(pt.norm() < 1.0)) {
    fail(ErrorKind::PointOutsideBall,
         "point norm " + std::to_string(pt.norm()) + " is not < 1");
  }
  return pt;
}

double Point::norm2() const {
  double out = 0.0;
  for (const Complex& c : z) out += std::norm(c);
  return out;
}

double Point::norm() const { return std::sqrt(norm2()); }

Complex herm_inner(const std::vector<Complex>& a,
                   const std::vector<Complex>& b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::InvalidParams, "dimension mismatch in inner product");
  }
  Complex out = 0.0;
  for (size_t t = 0; t < a.size(); ++t) out += a[t] * std::conj(b[t]);
  return out;
}

Complex herm_inner(const Point& a, const Point& b) {
  return herm_inner(a.z, b.z);
}

PointSeq PointSeq::make(SpaceParams params, std::vector<Point> points,
                        std::vector<std::string> labels) {
  for (const Point& pt : points) {
    if (pt.n() != params.n) {
      fail(ErrorKind::InvalidParams, "point dimension does not match n");
    }
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      double d2 = 0.0;
      for (int t = 0; t < params.n; ++t) {
        d2 += std::norm(points[i].z[t] - points[j].z[t]);
      }
      if (d2 == 0.0) {
        fail(ErrorKind::InvalidParams,
             "points " + std::to_string(i) + " and " + std::to_string(j) +
                 " coincide");
      }
    }
  }
  if (!labels.empty() && labels.size() != points.size()) {
    fail(ErrorKind::InvalidParams, "label count does not match point count");
  }
  if (labels.empty()) {
    labels.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
      labels.push_back("a" + std::to_string(i + 1));
    }
  }
  return PointSeq{params, std::move(points), std::move(labels)};
}

}  // namespace hsball
