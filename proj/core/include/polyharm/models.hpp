#pragma once

// Analytic domain and target models in a single chart.  Models are immutable
// and cheap to copy; all evaluation is pure.

#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyharm/jet.hpp"

namespace polyharm {

class DomainModel {
 public:
  enum class Kind { flat_torus, user_metric, sphere_stereo };

  // Flat metric on the torus R^m / (periods).
  static DomainModel flat_torus(std::vector<double> periods);
  // g_{ij}(x) given by expressions in x1..xm, either m*m row-major or the
  // m(m+1)/2 upper triangle; periodic with the given periods.
  static DomainModel user_metric(int m, const std::vector<std::string>& g, std::vector<double> periods,
                                 const std::map<std::string, double>& params = {});
  // Round sphere of the given radius.  m = 1 uses the angle chart, m >= 2 the
  // stereographic chart g = r² 4/(1+|x|²)² δ.  Pointwise use only.
  static DomainModel sphere_stereo(int m, double radius);

  int dim() const;
  Kind kind() const;
  std::string kind_name() const;
  // True when the model lives on a periodic box and can carry a grid.
  bool gridable() const;
  const std::vector<double>& periods() const;

  // g_{ij} at the jet point x (m jets over one space).
  std::vector<Jet> metric(const std::vector<Jet>& x) const;

  std::vector<double> metric_at(const double* x) const;
  std::vector<double> metric_inv_at(const double* x) const;
  std::vector<double> christoffel_at(const double* x) const;
  // ∂_l Γ^k_{ij} at index ((k*m + i)*m + j)*m + l.
  std::vector<double> christoffel_jet_at(const double* x) const;
  std::vector<double> ricci_at(const double* x) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> p_;
};

// Taylor data of a target model about a point y0; jets over JetSpace(n, D).
struct TargetLocal {
  int n = 0;
  std::vector<Jet> h;      // n*n
  std::vector<Jet> gamma;  // n^3
  std::vector<Jet> S;      // n^4 (empty unless requested)
  std::vector<Jet> R;      // n^4
  std::vector<Jet> dR;     // n^5
  std::vector<Jet> ddR;    // n^6
  bool dR_zero = false;    // ∇R and ∇²R vanish identically (locally symmetric)
};

// Degrees wanted from TargetModel::local; -1 means not needed.
struct LocalRequest {
  int gamma = 0;
  int S = -1;
  int R = -1;
  int dR = -1;
  int ddR = -1;
};

class TargetModel {
 public:
  enum class Kind { euclidean, round_sphere_polar, space_form, user_metric };

  static TargetModel euclidean(int n);
  // Unit sphere S^n in polar coordinates (ỹ, s), s the last coordinate, with
  // the angle chart on S^1 (n = 2) or the stereographic chart on S^{n-1}.
  static TargetModel round_sphere_polar(int n, double collar = 1e-3);
  // Constant curvature c in the conformal chart h = δ/(1 + c|y|²/4)².
  static TargetModel space_form(int n, double c);
  // h_{αβ}(y) by expressions in y1..yn; jet_order bounds the Taylor degree of Γ.
  static TargetModel user_metric(int n, const std::vector<std::string>& h,
                                 const std::map<std::string, double>& params = {}, int jet_order = 16);

  int dim() const;
  Kind kind() const;
  std::string kind_name() const;
  double collar() const;
  std::optional<double> constant_curvature() const;
  bool locally_symmetric() const { return constant_curvature().has_value(); }
  // Highest order of Γ derivatives the model can supply.
  int jet_order() const;
  // Throws CapabilityError when `order` exceeds jet_order().
  void require_jet_order(int order, const std::string& what) const;

  bool in_chart(const double* y) const;
  // Throws ChartError naming the point when y is outside the chart.
  void check_chart(const double* y) const;

  std::vector<Jet> metric(const std::vector<Jet>& y) const;
  // Γ at the jet point y; the result has the degree of y minus `loss`, where
  // loss is 1 for user metrics (computed from h) and 0 for closed forms.
  std::vector<Jet> christoffel(const std::vector<Jet>& y) const;
  int christoffel_loss() const;

  // Highest Γ derivative order that local() needs for `req`.
  int christoffel_order(const LocalRequest& req) const;
  TargetLocal local(const double* y0, const LocalRequest& req) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> p_;
};

// Closed-form Christoffel symbols of the unit sphere in polar coordinates at
// the jet point y = (ỹ, s).
std::vector<Jet> sphere_polar_christoffel(const std::vector<Jet>& y);

}  // namespace polyharm
