#include "paracr/jet.hpp"

#include <mutex>
#include <optional>

#include "paracr/rational_function.hpp"

namespace paracr {

struct PdeSystem::Cache {
  std::mutex mu;
  std::optional<Expr> dg, d2g, d3g;
};

PdeSystem::PdeSystem(Expr G, Expr H) : G_(std::move(G)), H_(std::move(H)), cache_(std::make_shared<Cache>()) {}

const Expr& PdeSystem::DG() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->dg) cache_->dg = total_D(G_, *this);
  return *cache_->dg;
}

const Expr& PdeSystem::D2G() const {
  Expr dg = DG();
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->d2g) cache_->d2g = total_D(dg, *this);
  return *cache_->d2g;
}

const Expr& PdeSystem::D3G() const {
  Expr d2g = D2G();
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->d3g) cache_->d3g = total_D(d2g, *this);
  return *cache_->d3g;
}

Expr total_D(const Expr& e, const PdeSystem& sys) {
  return simplify(make_sum({diff(e, "x"), var("p") * diff(e, "z"), var("r") * diff(e, "p"), sys.H() * diff(e, "r")}));
}

Expr total_Delta(const Expr& e, const PdeSystem& sys) {
  return simplify(
      make_sum({diff(e, "y"), sys.G() * diff(e, "z"), sys.DG() * diff(e, "p"), sys.D2G() * diff(e, "r")}));
}

Expr integrability_residual(const PdeSystem& sys) { return simplify(total_Delta(sys.H(), sys) - sys.D3G()); }

AdmissibilityReport check_admissible(const PdeSystem& sys, const SampleConfig& cfg) {
  AdmissibilityReport rep;
  rep.levi_degenerate = is_zero(diff(sys.G(), "r"), cfg);
  rep.two_nondegenerate = is_zero(diff(sys.G(), "p", 2), cfg);
  rep.integrable = is_zero(integrability_residual(sys), cfg);
  return rep;
}

}  // namespace paracr
