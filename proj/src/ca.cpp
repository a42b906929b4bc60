#include "texturalyze/ca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "texturalyze/common.hpp"

namespace texturalyze::ca {

namespace {

// Plain Pearson correlation; unlike the screening path there is no p-value,
// so two rows are enough.
double correlation(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& name) {
  size_t n = x.size();
  double mx = mean(x), my = mean(y);
  std::vector<double> xx(n), yy(n), xy(n);
  for (size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    xx[i] = dx * dx;
    yy[i] = dy * dy;
    xy[i] = dx * dy;
  }
  double sxx = pairwise_sum(xx), syy = pairwise_sum(yy), sxy = pairwise_sum(xy);
  if (sxx <= 0.0 || syy <= 0.0)
    throw Error(ErrorCode::ZeroVariance,
                "supplementary variable '" + name + "' is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

CaModel fit_ca(const survey::ContingencyTable& table) {
  long r = static_cast<long>(table.rows());
  long c = static_cast<long>(table.cols());
  long k = std::min(r, c) - 1;
  if (k < 1)
    throw Error(ErrorCode::DegenerateTable,
                "table has rank 0 after centering (needs at least 2 rows and "
                "2 columns)");
  if (table.total <= 0)
    throw Error(ErrorCode::EmptyTable, "table has no observations");

  CaModel model;
  model.row_labels = table.row_labels;
  model.col_labels = table.col_labels;
  model.grand_total = static_cast<double>(table.total);

  model.p.resize(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j)
      model.p(i, j) = static_cast<double>(table.at(i, j)) / model.grand_total;

  model.row_mass = model.p.rowwise().sum();
  model.col_mass = model.p.colwise().sum();

  // Z = D_r^{-1/2} [P - r c^t] D_c^{-1/2}, centering against independence.
  model.z.resize(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j)
      model.z(i, j) = (model.p(i, j) - model.row_mass(i) * model.col_mass(j)) /
                      std::sqrt(model.row_mass(i) * model.col_mass(j));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      model.z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // The centering removes one dimension; keep the K leading ones.
  Eigen::VectorXd sigma = svd.singularValues().head(k);
  Eigen::MatrixXd u = svd.matrixU().leftCols(k);
  Eigen::MatrixXd v = svd.matrixV().leftCols(k);

  // Dimensions at the numerical noise floor carry no signal.
  double floor = 1e-12 * sigma(0);
  for (long d = 0; d < k; ++d)
    if (sigma(d) < floor) sigma(d) = 0.0;

  model.row_coords.resize(r, k);
  model.col_coords.resize(c, k);
  for (long d = 0; d < k; ++d) {
    Eigen::VectorXd gd = v.col(d) * sigma(d);
    for (long j = 0; j < c; ++j) gd(j) /= std::sqrt(model.col_mass(j));
    // Sign convention: largest-magnitude column loading positive.
    long arg = 0;
    for (long j = 1; j < c; ++j)
      if (std::fabs(gd(j)) > std::fabs(gd(arg))) arg = j;
    double s = gd(arg) < 0.0 ? -1.0 : 1.0;
    model.col_coords.col(d) = s * gd;
    for (long i = 0; i < r; ++i)
      model.row_coords(i, d) =
          s * u(i, d) * sigma(d) / std::sqrt(model.row_mass(i));
  }

  model.singular_values = sigma;
  model.eigenvalues = sigma.array().square();
  model.total_inertia = model.eigenvalues.sum();
  model.inertia_share = Eigen::VectorXd::Zero(k);
  if (model.total_inertia > 0.0)
    model.inertia_share = model.eigenvalues / model.total_inertia;
  return model;
}

double chi2_distance(const CaModel& model, int i, int j) {
  long r = model.p.rows(), c = model.p.cols();
  if (i < 0 || j < 0 || i >= r || j >= r)
    throw std::out_of_range("chi2_distance: row index out of range");
  double d2 = 0.0;
  for (long col = 0; col < c; ++col) {
    double diff = model.p(i, col) / model.row_mass(i) -
                  model.p(j, col) / model.row_mass(j);
    d2 += diff * diff / model.col_mass(col);
  }
  return std::sqrt(d2);
}

SupplementaryProjection project_supplementary(
    const CaModel& model,
    const std::vector<std::pair<std::string, std::vector<double>>>& variables) {
  long r = model.p.rows();
  long k = model.dimensions();
  SupplementaryProjection out;
  out.loadings.resize(static_cast<long>(variables.size()), k);
  for (size_t v = 0; v < variables.size(); ++v) {
    const auto& [name, values] = variables[v];
    if (static_cast<long>(values.size()) != r)
      throw Error(ErrorCode::SupplementaryMismatch,
                  "variable '" + name + "' has " +
                      std::to_string(values.size()) + " values for " +
                      std::to_string(r) + " rows");
    out.names.push_back(name);
    for (long d = 0; d < k; ++d) {
      if (model.singular_values(d) == 0.0) {
        out.loadings(static_cast<long>(v), d) = 0.0;
        continue;
      }
      std::vector<double> coord(static_cast<size_t>(r));
      for (long i = 0; i < r; ++i) coord[i] = model.row_coords(i, d);
      out.loadings(static_cast<long>(v), d) = correlation(values, coord, name);
    }
  }
  return out;
}

}  // namespace texturalyze::ca
