#pragma once

/**
 * @file constructions.hpp
 * @brief Reusable geometric constructions: bivectors and their anchored
 * coframe data, bundles of algebras, metric connections, and the coadjoint
 * action of the aff(1) double.
 */

#include "tangent.hpp"

namespace pdv {

/// An antisymmetric matrix of rational functions P_ij = pi(dx_i, dx_j)
/// presenting a bivector on the chart.
inline Matrix<Scalar> bivector_matrix(
    const ChartPtr& c,
    const std::vector<std::tuple<std::size_t, std::size_t, Scalar>>& entries) {
    Matrix<Scalar> p(c->dim(), c->dim(), Scalar(c), Scalar(c, 1));
    for (const auto& [i, j, v] : entries) {
        p.at(i, j) = v;
        p.at(j, i) = -v;
    }
    return p;
}

/// pi#(alpha), the vector field (pi# alpha)^j = sum_i alpha_i P_ij.
inline VectorField bivector_sharp(const Matrix<Scalar>& p, const KForm& alpha) {
    const ChartPtr& c = alpha.chart();
    VectorField x(c);
    for (std::size_t j = 0; j < c->dim(); ++j)
        for (std::size_t i = 0; i < c->dim(); ++i)
            x.comp(j) += alpha.coeff({i}) * p.at(i, j);
    return x;
}

/// pi(alpha, beta) for 1-forms.
inline Scalar bivector_pair(const Matrix<Scalar>& p, const KForm& alpha, const KForm& beta) {
    Scalar out(alpha.chart());
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            out += alpha.coeff({i}) * beta.coeff({j}) * p.at(i, j);
    return out;
}

/// The anchored-bracket data of a bivector on the coordinate coframe:
/// a(dx_i) = pi#(dx_i) and [dx_i, dx_j] = d(P_ij).  For a Poisson bivector
/// this is the cotangent Lie algebroid; otherwise verify() reports failures.
inline LieAlgebroidData bivector_algebroid(const ChartPtr& c, const Matrix<Scalar>& p) {
    LieAlgebroidData la;
    la.chart = c;
    const std::size_t n = c->dim();
    for (std::size_t i = 0; i < n; ++i) {
        la.labels.push_back("d" + c->coord(i));
        la.anchors.push_back(bivector_sharp(p, KForm::coordinate_diff(c, i)));
    }
    la.c.assign(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(c))));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) la.c[i][j][k] = p.at(i, j).derivative(k);
    return la;
}

/// A bundle of (possibly non-Lie) algebras inside the standard Courant
/// algebroid: W = T*M with zero anchors and constant antisymmetric structure
/// constants; the canonical connection is A_ij = -sum_k c_ij^k dx_k.
inline PseudoConnection bundle_of_algebras(
    const std::shared_ptr<const ExactBackend>& e,
    const std::vector<std::vector<std::vector<Rational>>>& cc) {
    const ChartPtr& c = e->chart();
    LieAlgebroidData la;
    la.chart = c;
    const std::size_t n = c->dim();
    for (std::size_t i = 0; i < n; ++i) la.labels.push_back("d" + c->coord(i));
    la.anchors.assign(n, VectorField(c));
    la.c.assign(n, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(c))));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) la.c[i][j][k] = Scalar(c, cc[i][j][k]);
    return cotangent_connection(la, e);
}

/// The metric-connection structure of (g, omega) on a chart with the
/// Euclidean metric: W is the graph of X -> i_X omega + g-flat(X) and
/// A_ij = eta(d/dx_i, d/dx_j, .) with eta = d(omega).
inline PseudoConnection metric_connection(const std::shared_ptr<const ExactBackend>& e,
                                          const KForm& omega) {
    const ChartPtr& c = e->chart();
    if (omega.degree() != 2) throw std::invalid_argument("omega must be a 2-form");
    const KForm eta = exterior_d(omega);
    auto coord_vf = [&](std::size_t i) {
        VectorField x(c);
        x.comp(i) = Scalar(c, 1);
        return x;
    };
    std::vector<Section> frame;
    for (std::size_t i = 0; i < c->dim(); ++i)
        frame.push_back(e->section_of(
            coord_vf(i), interior(coord_vf(i), omega) + KForm::coordinate_diff(c, i)));
    std::vector<std::vector<KForm>> a(c->dim(), std::vector<KForm>(c->dim(), KForm(c, 1)));
    for (std::size_t i = 0; i < c->dim(); ++i)
        for (std::size_t j = 0; j < c->dim(); ++j)
            a[i][j] = interior(coord_vf(j), interior(coord_vf(i), eta));
    return PseudoConnection(SubbundleFrame(e, std::move(frame)), std::move(a));
}

/// The aff(1) double acting on the dual of aff(1), chart (p, q): the Lie
/// half acts by the coadjoint action, the dual half by translations.  The
/// stabilizers are Lagrangian.
inline std::shared_ptr<const ActionBackend> aff1_dual_action(const ChartPtr& c) {
    if (c->dim() != 2) throw std::invalid_argument("aff(1)* needs a 2-dimensional chart");
    const Scalar q = Scalar::coordinate(c, 1);
    VectorField ra(c), rb(c), rastar(c), rbstar(c);
    ra.comp(1) = q;   // q d/dq
    rb.comp(0) = -q;  // -q d/dp
    rastar.comp(0) = Scalar(c, 1);
    rbstar.comp(1) = Scalar(c, 1);
    return ActionBackend::make(c, aff1_double(), {ra, rb, rastar, rbstar});
}

} // namespace pdv
