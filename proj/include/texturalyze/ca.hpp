#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "texturalyze/survey.hpp"

namespace texturalyze::ca {

// Fitted correspondence analysis of a pruned contingency table under the
// chi-square metric. Coordinates are principal coordinates; the sign of each
// dimension is fixed by making the largest-magnitude column loading positive.
struct CaModel {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  double grand_total = 0.0;          // n
  Eigen::MatrixXd p;                 // correspondence matrix N / n
  Eigen::VectorXd row_mass, col_mass;
  Eigen::MatrixXd z;                 // standardized residuals
  Eigen::VectorXd singular_values;   // descending, K = min(rows, cols) - 1
  Eigen::VectorXd eigenvalues;       // sigma_k^2
  Eigen::MatrixXd row_coords;        // rows x K
  Eigen::MatrixXd col_coords;        // cols x K
  double total_inertia = 0.0;        // sum of eigenvalues = chi2 / n
  Eigen::VectorXd inertia_share;     // eigenvalue / total, zeros if total = 0

  int dimensions() const { return static_cast<int>(singular_values.size()); }
};

CaModel fit_ca(const survey::ContingencyTable& table);

// Chi-square distance between row profiles i and j (the distance, not its
// square). Equals the Euclidean distance between full-dimensional row
// principal coordinates.
double chi2_distance(const CaModel& model, int i, int j);

struct SupplementaryProjection {
  std::vector<std::string> names;
  // names.size() x dimensions: Pearson correlation of each variable with
  // each column of the row principal coordinates.
  Eigen::MatrixXd loadings;
};

// Projects external per-row variables into the fitted space without touching
// the factorization. Each variable needs one value per retained row.
SupplementaryProjection project_supplementary(
    const CaModel& model,
    const std::vector<std::pair<std::string, std::vector<double>>>& variables);

}  // namespace texturalyze::ca
