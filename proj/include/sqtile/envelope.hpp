#pragma once

#include <Eigen/Dense>

#include <random>

#include "sqtile/forni.hpp"
#include "sqtile/homology.hpp"
#include "sqtile/theorems.hpp"

namespace sqtile {

// Cloud of period-coordinate points on the GL(2,R)+ orbit of an origami,
// all recorded in the marking of the base point: random words in T, S only
// contribute their 2x2 part once the relabeling cocycle is undone, so a
// sample is g_pert * W * Pi_0.
struct OrbitCloud {
  Eigen::MatrixXd points;  // count x 2r, rows are (x_row | y_row)
  std::vector<double> dets;
  std::uint64_t seed = 0;
  int rel_rank = 0;
  std::string base_label;
};

inline OrbitCloud sample_orbit(const Origami& o, const HomologyData& hd, int count,
                               std::uint64_t seed, double spread = 0.05,
                               int word_len = 5) {
  if (count < 1) throw Error("sample_orbit: count must be >= 1");
  int r = hd.rel_rank;
  OrbitCloud cloud;
  cloud.seed = seed;
  cloud.rel_rank = r;
  cloud.base_label = o.label;
  cloud.points.resize(count, 2 * r);
  cloud.dets.resize(count);

  std::vector<double> x0(r), y0(r);
  for (int i = 0; i < r; ++i) {
    x0[i] = to_double(hd.taut_a_rel[i]);
    y0[i] = to_double(hd.taut_b_rel[i]);
  }

  std::mt19937_64 rng(seed);
  auto unif = [&]() { return (rng() >> 11) * (1.0 / 9007199254740992.0) * 2.0 - 1.0; };
  for (int k = 0; k < count; ++k) {
    // Short word in T, S and inverses; SL(2,Z) part of the sampled g.
    double w[2][2] = {{1, 0}, {0, 1}};
    int len = k == 0 ? 0 : static_cast<int>(rng() % (word_len + 1));
    for (int t = 0; t < len; ++t) {
      double m[2][2];
      switch (rng() % 4) {
        case 0: m[0][0] = 1; m[0][1] = 1; m[1][0] = 0; m[1][1] = 1; break;   // T
        case 1: m[0][0] = 1; m[0][1] = -1; m[1][0] = 0; m[1][1] = 1; break;  // T^-1
        case 2: m[0][0] = 0; m[0][1] = 1; m[1][0] = -1; m[1][1] = 0; break;  // S
        default: m[0][0] = 0; m[0][1] = -1; m[1][0] = 1; m[1][1] = 0; break; // S^-1
      }
      double n00 = m[0][0] * w[0][0] + m[0][1] * w[1][0];
      double n01 = m[0][0] * w[0][1] + m[0][1] * w[1][1];
      double n10 = m[1][0] * w[0][0] + m[1][1] * w[1][0];
      double n11 = m[1][0] * w[0][1] + m[1][1] * w[1][1];
      w[0][0] = n00; w[0][1] = n01; w[1][0] = n10; w[1][1] = n11;
    }
    // Near-identity perturbation with positive determinant.
    double g[2][2];
    do {
      double p[2][2] = {{1 + spread * unif(), spread * unif()},
                        {spread * unif(), 1 + spread * unif()}};
      g[0][0] = p[0][0] * w[0][0] + p[0][1] * w[1][0];
      g[0][1] = p[0][0] * w[0][1] + p[0][1] * w[1][1];
      g[1][0] = p[1][0] * w[0][0] + p[1][1] * w[1][0];
      g[1][1] = p[1][0] * w[0][1] + p[1][1] * w[1][1];
    } while (g[0][0] * g[1][1] - g[0][1] * g[1][0] <= 0.1);
    cloud.dets[k] = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    for (int i = 0; i < r; ++i) {
      cloud.points(k, i) = g[0][0] * x0[i] + g[0][1] * y0[i];
      cloud.points(k, r + i) = g[1][0] * x0[i] + g[1][1] * y0[i];
    }
  }
  return cloud;
}

struct AffineFit {
  Eigen::MatrixXd directions;  // 2r x dim, orthonormal span of the centered cloud
  Eigen::MatrixXd t_real;      // r x (dim/2) when complex_check passes
  Eigen::VectorXd singular_values;
  int dim = 0;           // real dimension of the fitted affine subspace
  double residual = 0.0; // max distance of cloud points to the fitted subspace
  bool complex_check = false;
  double complex_defect = 0.0;
  double tol = 0.0;
};

// Distance of each column of `vecs` to the span of `basis` (orthonormal).
inline double max_residual_to(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& vecs) {
  double worst = 0.0;
  for (int j = 0; j < vecs.cols(); ++j) {
    Eigen::VectorXd v = vecs.col(j);
    Eigen::VectorXd proj = basis * (basis.transpose() * v);
    worst = std::max(worst, (v - proj).norm());
  }
  return worst;
}

// Centered SVD fit; complex_check verifies that the fitted span is invariant
// under the period-coordinate complex rotation (x, y) -> (-y, x) AND equals
// the complexification of its real part.
inline AffineFit affine_fit(const OrbitCloud& cloud, double tol = 1e-9) {
  AffineFit fit;
  fit.tol = tol;
  int count = static_cast<int>(cloud.points.rows());
  int r = cloud.rel_rank;
  Eigen::RowVectorXd mean = cloud.points.colwise().mean();
  Eigen::MatrixXd centered = cloud.points.rowwise() - mean;
  if (count == 1) {
    fit.dim = 0;
    fit.complex_check = true;
    fit.t_real = Eigen::MatrixXd(r, 0);
    fit.directions = Eigen::MatrixXd(2 * r, 0);
    return fit;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  fit.singular_values = svd.singularValues();
  double top = fit.singular_values.size() ? fit.singular_values(0) : 0.0;
  int dim = 0;
  for (int i = 0; i < fit.singular_values.size(); ++i)
    if (top > 0 && fit.singular_values(i) > tol * top) ++dim;
  fit.dim = dim;
  fit.directions = svd.matrixV().leftCols(dim);

  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = centered.row(k).transpose();
    Eigen::VectorXd proj = fit.directions * (fit.directions.transpose() * v);
    fit.residual = std::max(fit.residual, (v - proj).norm());
  }

  // Complex rotation of each direction must stay in the span.
  double scale = std::max(1.0, top);
  Eigen::MatrixXd rotated(2 * r, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < r; ++i) {
      rotated(i, j) = -fit.directions(r + i, j);
      rotated(r + i, j) = fit.directions(i, j);
    }
  }
  double defect = dim ? max_residual_to(fit.directions, rotated) : 0.0;

  // Real part: span of the x- and y-halves of the directions.
  Eigen::MatrixXd halves(r, 2 * dim);
  for (int j = 0; j < dim; ++j) {
    halves.col(2 * j) = fit.directions.col(j).head(r);
    halves.col(2 * j + 1) = fit.directions.col(j).tail(r);
  }
  int half_dim = 0;
  Eigen::MatrixXd half_basis(r, 0);
  if (dim > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> hsvd(halves, Eigen::ComputeThinU);
    double htop = hsvd.singularValues()(0);
    for (int i = 0; i < hsvd.singularValues().size(); ++i)
      if (hsvd.singularValues()(i) > tol * htop) ++half_dim;
    half_basis = hsvd.matrixU().leftCols(half_dim);
    // Embeddings (w, 0) and (0, w) must lie in the fitted span.
    Eigen::MatrixXd emb(2 * r, 2 * half_dim);
    emb.setZero();
    for (int j = 0; j < half_dim; ++j) {
      emb.col(2 * j).head(r) = half_basis.col(j);
      emb.col(2 * j + 1).tail(r) = half_basis.col(j);
    }
    defect = std::max(defect, max_residual_to(fit.directions, emb));
  }
  fit.complex_defect = defect;
  fit.complex_check = (dim % 2 == 0) && (2 * half_dim == dim) &&
                      (defect <= std::max(tol, 1e-7) * scale);
  if (fit.complex_check) fit.t_real = half_basis;
  return fit;
}

struct PairingStatus {
  std::size_t tangent_col = 0, f_col = 0;
  std::string status;  // "exact-zero" | "numerically-zero" | "violated"
  std::string value;
};

struct TangentReport {
  RatMat p_tangent;  // rationalized p(T_real), canonical basis
  bool rationalized = false;
  double rationalization_residual = 0.0;
  bool equals_tautological = false;
  std::vector<PairingStatus> pairings;
  bool all_orthogonal = true;
};

// Numeric reduced row echelon with a relative pivot threshold; the RREF of a
// rational subspace has rational entries, which is what makes the
// rationalization below well posed.
inline Eigen::MatrixXd numeric_rref(Eigen::MatrixXd m, double tol) {
  int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return m;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int p = row;
    for (int i = row; i < rows; ++i)
      if (std::fabs(m(i, col)) > std::fabs(m(p, col))) p = i;
    if (std::fabs(m(p, col)) <= tol * scale) {
      for (int i = row; i < rows; ++i) m(i, col) = 0.0;
      continue;
    }
    m.row(p).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (int i = 0; i < rows; ++i)
      if (i != row) m.row(i) -= m(i, col) * m.row(row);
    ++row;
  }
  return m;
}

inline TangentReport tangent_report(const AffineFit& fit, const HomologyData& hd,
                                    const ForniCertificate& cert,
                                    Int denominator_bound = 64, double tol = 1e-9) {
  if (!fit.complex_check)
    throw DimensionMismatch("tangent_report: fit has no real form (complex_check failed)");
  TangentReport rep;
  int k = static_cast<int>(fit.t_real.cols());
  // p(T_real): first abs_rank coordinates of each direction.
  Eigen::MatrixXd pt(hd.abs_rank, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < hd.abs_rank; ++i) pt(i, j) = fit.t_real(i, j);
  Eigen::MatrixXd reduced = numeric_rref(pt.transpose(), 1e-8).transpose();

  std::vector<RatVec> cols;
  double worst = 0.0;
  for (int j = 0; j < reduced.cols(); ++j) {
    if (reduced.col(j).cwiseAbs().maxCoeff() <= tol) continue;
    RatVec col(hd.abs_rank);
    bool ok = true;
    for (int i = 0; i < hd.abs_rank && ok; ++i) {
      Rat q;
      ok = rationalize(reduced(i, j), denominator_bound, q);
      if (ok) {
        worst = std::max(worst, std::fabs(reduced(i, j) - to_double(q)));
        col[i] = q;
      }
    }
    if (!ok) {
      rep.rationalized = false;
      return rep;
    }
    cols.push_back(std::move(col));
  }
  rep.rationalized = true;
  rep.rationalization_residual = worst;
  RatMat pt_exact(hd.abs_rank, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) pt_exact.set_col(j, cols[j]);
  rep.p_tangent = canonical_basis(pt_exact);
  rep.equals_tautological =
      subspace_equal(rep.p_tangent, tautological_plane(hd));

  for (std::size_t t = 0; t < rep.p_tangent.cols(); ++t)
    for (std::size_t fcol = 0; fcol < cert.f_basis.cols(); ++fcol) {
      Rat val = pairing(rep.p_tangent.col(t), cert.f_basis.col(fcol), hd);
      PairingStatus st;
      st.tangent_col = t;
      st.f_col = fcol;
      st.value = rat_to_string(val);
      if (val == 0) st.status = "exact-zero";
      else if (std::fabs(to_double(val)) < tol) st.status = "numerically-zero";
      else {
        st.status = "violated";
        rep.all_orthogonal = false;
      }
      rep.pairings.push_back(std::move(st));
    }
  return rep;
}

inline nlohmann::json fit_to_json(const AffineFit& fit) {
  nlohmann::json j;
  j["dim"] = fit.dim;
  j["residual"] = round12(fit.residual);
  j["complex_check"] = fit.complex_check;
  j["complex_defect"] = round12(fit.complex_defect);
  j["tol"] = fit.tol;
  nlohmann::json sv = nlohmann::json::array();
  for (int i = 0; i < fit.singular_values.size(); ++i)
    sv.push_back(round12(fit.singular_values(i)));
  j["singular_values"] = sv;
  return j;
}

}  // namespace sqtile
