#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnlab/corpus.hpp"
#include "gnlab/csv.hpp"
#include "gnlab/exact.hpp"
#include "gnlab/funcspace.hpp"

namespace gnlab {

/// Exponent tuple of the generalized inequality
///   ||D^j u||_p <~ ||D^m u||_r^theta ||D^{k_1}u ... D^{k_kappa}u||_q^{(1-theta)/kappa}.
struct GNParams {
  Exponent p = Exponent::infinity();
  Exponent q = Exponent(1);
  Exponent r = Exponent(1);
  std::vector<int> ks{0};
  int j = 0;
  int m = 1;
  Scalar theta = Scalar(1);

  int kappa() const noexcept { return static_cast<int>(ks.size()); }
  Scalar kbar() const;

  static GNParams cor7();
  static GNParams cor6(int k);
};

/// Orders, exponent ranges and theta in [0,1]. Parameter error otherwise.
void validate_orders(const GNParams& params);
/// validate_orders plus theta >= theta_star.
void validate(const GNParams& params);

/// (j - kbar)/(m - kbar); exact when the orders are integers.
Scalar theta_star(const GNParams& params);

struct RelationResidual {
  Scalar general;                  // (1/p - j) - theta(1/r - m) - (1-theta)(1/(q kappa) - kbar)
  std::optional<Scalar> critical;  // 1/p - theta/r - (1-theta)/(q kappa), only at theta = theta_star
  bool consistent = true;          // both forms agree when critical is present
  bool holds(double tol = 1e-12) const;
};

RelationResidual relation_residual(const GNParams& params);

enum class Unknown { kP, kQ, kTheta };

/// Fills in the unknown field from the scaling relation. Infeasible error when
/// the solution leaves [1, inf] or [theta_star, 1].
GNParams solve_exponent(GNParams params, Unknown unknown);

nlohmann::json to_json(const GNParams& params);
GNParams params_from_json(const nlohmann::json& j);
/// FNV-1a of the canonical JSON form.
std::string params_hash(const GNParams& params);

struct BoundedExtras {
  int k0 = 0;
  Exponent s = Exponent(1);
  std::optional<Interval> omega;
};

struct InequalityReport {
  std::string kind;
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> factors;
  double rhs = 0.0;
  double ratio = 0.0;
  bool degenerate = false;           // lhs = rhs = 0, ratio set to 0
  bool violation_candidate = false;  // rhs = 0 < lhs
  bool classical = false;            // single-factor bounded form
  GNParams params;
  std::size_t n = 0;
  Interval grid;

  double factor(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// On the line: u supported inside the grid interval.
InequalityReport evaluate_generalized(const GridFunction& u, const GNParams& params);
/// On [0,1] with the low-order term ||D^{k0} u||_{L^s(0,1)}.
InequalityReport evaluate_bounded(const GridFunction& u, const GNParams& params, const BoundedExtras& extras);
/// ||D^j u||_p <~ ||D^m u||_r + ||prod||_{L^q(omega)}^{1/kappa} on [0,1].
InequalityReport evaluate_localized(const GridFunction& u, const GNParams& params, const Interval& omega);

enum class IbpCase { kL4, kL6 };

struct IbpResidual {
  double raw = 0.0;         // int (u')^4 + 3 int u (u')^2 u''  (or the L6 analogue)
  double normalized = 0.0;  // raw / int (u')^4
};

IbpResidual ibp_identities(const GridFunction& u, IbpCase which);

struct SpecialRow {
  std::string id;
  bool skipped = false;
  std::string note;
  double ratio4 = 0.0;     // ||u'||_4 / ||u u''||_2^{1/2}
  double ratio6 = 0.0;     // ||u'||_6 / ||u u' u''||_2^{1/3}
  double ratio_half = 0.0; // |u|_{W^{1/2,4}} / ||u u'||_2^{1/2}
};

/// Ceilings for ratio4 and ratio6.
double ratio4_ceiling();
double ratio6_ceiling();

double ratio4(const GridFunction& u);
double ratio6(const GridFunction& u);
double ratio_half(const GridFunction& u);

/// Integer ratios on an N-point grid over each support, the seminorm ratio on
/// at most 4097 points.
std::vector<SpecialRow> special_constants(const std::vector<CorpusEntry>& corpus, std::size_t n);

struct ProbeRow {
  std::string id;
  bool skipped = false;
  std::string note;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// ||D^{kbar}u||_{q kappa} / ||prod||_q^{1/kappa}. Non-integer kbar is only
/// supported for kappa = 2, ks = (k, k+1), through the 1/2-seminorm of D^k u.
std::vector<ProbeRow> open_problem_probe(const std::vector<CorpusEntry>& corpus, const Exponent& q,
                                         const std::vector<int>& ks, std::size_t n);

/// One row per (tuple, function): params_hash,function_id,lhs,rhs_top,rhs_product,rhs,ratio,N.
CsvTable sweep_generalized(const std::vector<CorpusEntry>& corpus, const std::vector<GNParams>& tuples,
                           std::size_t n);

}  // namespace gnlab
