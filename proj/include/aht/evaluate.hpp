#pragma once
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "aht/field.hpp"
#include "aht/signed_distance.hpp"
#include "aht/symbolic.hpp"

namespace aht {

// Discrete realization of the symbolic factor alphabet: the carried field y and the material
// derivatives Du[j] = D^j u (Du[0] = u). Jacobians, psi = y - u and the boundary-distance
// tensors are built lazily and cached; everything references caller-owned fields.
class EvalContext {
 public:
  EvalContext(const VectorField& y, const std::vector<VectorField>& Du,
              const SignedDistance* sd = nullptr);

  const GridPtr& grid() const { return y_->grid(); }
  int max_order() const { return static_cast<int>(Du_->size()) - 1; }

  const JacobianField& grad_y() const;
  const JacobianField& grad_Du(int j) const;  // MissingFactor when j is not supplied
  const VectorField& Du(int j) const;
  const VectorField& psi() const;      // y - u
  VectorField Dpsi(int j) const;       // D^j psi: psi for j = 0, -Du[j] for j >= 1
  const SignedDistance& distance() const;  // built on demand when not injected

 private:
  const VectorField* y_;
  const std::vector<VectorField>* Du_;
  const SignedDistance* sd_;
  mutable std::unique_ptr<SignedDistance> sd_owned_;
  mutable std::optional<JacobianField> gy_;
  mutable std::map<int, JacobianField> gDu_;
  mutable std::optional<VectorField> psi_;
};

// matrix-product expression -> scalar field (trace or antisymmetric bridge)
ScalarField evaluate(const MatExpr& e, const EvalContext& ctx);

// boundary-distance expression -> trace on the boundary nodes (disk/annulus only: WrongLocus)
BoundaryTrace evaluate(const RhoExpr& e, const EvalContext& ctx);

// transported-loop kernel expression -> vector field, with D^j psi = -D^j u for j >= 1
VectorField evaluate(const KernelExpr& e, const EvalContext& ctx);

}  // namespace aht
