#include "aht/evaluate.hpp"

#include "aht/operators.hpp"

namespace aht {

EvalContext::EvalContext(const VectorField& y, const std::vector<VectorField>& Du,
                         const SignedDistance* sd)
    : y_(&y), Du_(&Du), sd_(sd) {
  require(!Du.empty(), ErrorCode::MissingFactor, "context needs at least u = D^0 u");
  check_same_grid(y.grid(), Du.front().grid(), "EvalContext");
}

const JacobianField& EvalContext::grad_y() const {
  if (!gy_) gy_ = jacobian(*y_);
  return *gy_;
}

const VectorField& EvalContext::Du(int j) const {
  require(j >= 0 && j < static_cast<int>(Du_->size()), ErrorCode::MissingFactor,
          "context lacks D^" + std::to_string(j) + " u");
  return (*Du_)[static_cast<size_t>(j)];
}

const JacobianField& EvalContext::grad_Du(int j) const {
  auto it = gDu_.find(j);
  if (it == gDu_.end()) it = gDu_.emplace(j, jacobian(Du(j))).first;
  return it->second;
}

const VectorField& EvalContext::psi() const {
  if (!psi_) psi_ = *y_ - Du(0);
  return *psi_;
}

VectorField EvalContext::Dpsi(int j) const {
  if (j == 0) return psi();
  return Du(j) * (-1.0);
}

const SignedDistance& EvalContext::distance() const {
  if (sd_) return *sd_;
  if (!sd_owned_) sd_owned_ = std::make_unique<SignedDistance>(grid()->domain());
  return *sd_owned_;
}

ScalarField evaluate(const MatExpr& e, const EvalContext& ctx) {
  ScalarField out(ctx.grid());
  for (const auto& [key, c] : e.terms) {
    require(key.lead_grad_y || !key.js.empty(), ErrorCode::MalformedExpr,
            "matrix term with no factors");
    JacobianField prod;
    size_t start = 0;
    if (key.lead_grad_y) {
      prod = ctx.grad_y();
    } else {
      prod = ctx.grad_Du(key.js[0]);
      start = 1;
    }
    for (size_t i = start; i < key.js.size(); ++i) prod = matmul(prod, ctx.grad_Du(key.js[i]));
    const ScalarField bridged = e.bridge == Bridge::Trace ? trace(prod) : asym(prod);
    const double w = c.convert_to<double>();
    for (int n = 0; n < out.size(); ++n) out[n] += w * bridged[n];
  }
  return out;
}

BoundaryTrace evaluate(const RhoExpr& e, const EvalContext& ctx) {
  const auto& g = ctx.grid();
  require(g->kind() != DomainKind::Torus, ErrorCode::WrongLocus,
          "boundary expression evaluated on a domain without boundary");
  const SignedDistance& sd = ctx.distance();
  BoundaryTrace out(g);
  std::vector<Vec2> slots;
  for (const auto& [key, c] : e.terms) {
    const int s = static_cast<int>(key.args.size());
    require(s >= 1 && s <= sd.s_max(), ErrorCode::OrderTooLarge,
            "distance tensor order " + std::to_string(s) + " exceeds the table");
    const double w = c.convert_to<double>();
    for (int comp = 0; comp < g->boundary_components(); ++comp) {
      const int ring = g->boundary_ring(comp);
      for (int i = 0; i < g->n2(); ++i) {
        const Vec2 x = g->boundary_node(comp, i);
        slots.clear();
        for (int a : key.args) slots.push_back(ctx.Du(a).at(ring, i));
        out(comp, i) += w * SignedDistance::contract(sd.tensor(x, s), slots);
      }
    }
  }
  return out;
}

VectorField evaluate(const KernelExpr& e, const EvalContext& ctx) {
  VectorField out(ctx.grid());
  for (const auto& [key, c] : e.terms) {
    VectorField w = ctx.Dpsi(key.psi);
    for (auto it = key.mats.rbegin(); it != key.mats.rend(); ++it)
      w = apply_transpose(ctx.grad_Du(*it), w);
    out += w * c.convert_to<double>();
  }
  return out;
}

}  // namespace aht
