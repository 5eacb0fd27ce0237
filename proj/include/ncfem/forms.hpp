#pragma once

#include <functional>
#include <vector>

#include "ncfem/fespace.hpp"
#include "ncfem/problem.hpp"

namespace ncfem {

/// One-sided trace: value and physical gradient.
struct Trace {
  double v = 0.0;
  Vec2 g = Vec2::Zero();
};

/// A contribution of one function to a quadrature point. On faces it carries
/// both traces; a basis function supported on one side has a zero trace on the
/// other, so a bilinear kernel applied to split entries sums to the kernel of
/// the whole function.
struct Entry {
  int dof = 0;
  Trace K;  ///< owner side (the only side in volume integrals)
  Trace N;  ///< neighbor side, zero on boundary faces
};

struct VolumeQuery {
  int elem;
  Bary lambda;
  Vec2 x;
};

struct FaceQuery {
  const Face* face;
  Bary lambda_owner;
  Bary lambda_neighbor;
  Vec2 x;
};

/// Supplies the functions entering one slot of a form. Within one element or
/// face the returned entry list must have the same DOF sequence at every
/// quadrature point.
class TraceSource {
 public:
  virtual ~TraceSource() = default;
  virtual void volume(const VolumeQuery& q, std::vector<Entry>& out) const = 0;
  virtual void face(const FaceQuery& q, std::vector<Entry>& out) const = 0;
};

/// All basis functions of a discrete space.
class BasisSource : public TraceSource {
 public:
  explicit BasisSource(const DiscreteSpace& s) : space_(s) {}
  void volume(const VolumeQuery& q, std::vector<Entry>& out) const override;
  void face(const FaceQuery& q, std::vector<Entry>& out) const override;

 private:
  void element_entries(int t, const Bary& lam, bool neighbor, std::vector<Entry>& out) const;
  const DiscreteSpace& space_;
};

/// A single function, the linear combination of analytic and discrete terms.
/// Its entry always has DOF 0.
class FieldSource : public TraceSource {
 public:
  FieldSource& add(const ManufacturedSolution& u, double coef = 1.0);
  FieldSource& add(const FeFunction& u, double coef = 1.0);
  void volume(const VolumeQuery& q, std::vector<Entry>& out) const override;
  void face(const FaceQuery& q, std::vector<Entry>& out) const override;

 private:
  std::vector<std::pair<const ManufacturedSolution*, double>> analytic_;
  std::vector<std::pair<const FeFunction*, double>> discrete_;
};

struct VolumePoint {
  int elem;
  Vec2 x;
  double weight;
  Mat2 K;
  Vec2 c;
  double r;
  double div_c;
};

struct FacePoint {
  const Face* face;
  Vec2 x;
  double weight;
  Vec2 normal;  ///< unit, outward from the owner
  double h;     ///< face length
  Mat2 K;
  Vec2 c;
  double alpha;  ///< Robin coefficient, boundary faces only
};

using VolumeKernel = std::function<double(const VolumePoint&, const Trace& w, const Trace& z)>;
using FaceKernel = std::function<double(const FacePoint&, const Entry& w, const Entry& z)>;
using VolumeLoad = std::function<double(const VolumePoint&, const Trace& z)>;
using FaceLoad = std::function<double(const FacePoint&, const Entry& z)>;

/// b(w, z) = sum of volume, interior-face and boundary-face integrals. Empty
/// kernels contribute nothing.
struct BilinearForm {
  VolumeKernel volume;
  FaceKernel interior;
  FaceKernel boundary;
};

struct LinearForm {
  VolumeLoad volume;
  FaceLoad interior;
  FaceLoad boundary;
};

using MatrixSink = std::function<void(int test, int trial, double value)>;
using VectorSink = std::function<void(int test, double value)>;

/// Integrates form(trial, test) with rules exact to `degree`. Contributions are
/// pushed per element, then per face, in mesh order.
void sweep(const ProblemSpec& p, const Mesh& m, const BilinearForm& form, const TraceSource& trial,
           const TraceSource& test, int degree, const MatrixSink& sink);
void sweep(const ProblemSpec& p, const Mesh& m, const LinearForm& form, const TraceSource& test,
           int degree, const VectorSink& sink);

/// Scalar value form(w, z) for single-function sources.
double evaluate(const ProblemSpec& p, const Mesh& m, const BilinearForm& form, const TraceSource& w,
                const TraceSource& z, int degree);
double evaluate(const ProblemSpec& p, const Mesh& m, const LinearForm& form, const TraceSource& z,
                int degree);

/// Upwind factor of c_up(w): owner trace if c.nu > 0, else neighbor trace
/// (interior) or 0 (boundary).
double upwind_value(double c_dot_nu, double w_owner, double w_neighbor, bool boundary);

// The discrete and continuous forms of the two schemes.

BilinearForm cr_bilinear();
LinearForm cr_linear(const ProblemSpec& p);

BilinearForm ipg_bilinear(int theta, double eta);
LinearForm ipg_linear(const ProblemSpec& p, int theta, double eta);

/// a(w, z) = (K grad w - c w, grad z) + (r w, z) + (alpha w, z) on Gamma2.
BilinearForm continuous_bilinear();
/// l(z) = (f, z) + (g1, z) on Gamma1 + (g2, z) on Gamma2.
LinearForm continuous_linear(const ProblemSpec& p);

/// (g, z) over the domain.
LinearForm source_load(ScalarField g);

enum class NormKind { L2, BrokenH1Semi, BrokenH1, EnergyVh, ExtendedVh };

const char* to_string(NormKind k);

/// Inner product of the named norm. EnergyVh and ExtendedVh use eta.
BilinearForm norm_form(NormKind kind, double eta = 1.0);

}  // namespace ncfem
