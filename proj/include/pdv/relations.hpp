#pragma once

/**
 * @file relations.hpp
 * @brief Courant relations and images of pseudo-Dirac structures.
 *
 * A relation R : E -/-> F is stored in "pullback presentation": the support is
 * the graph of a polynomial map phi : M -> N (M the base of E, N the base of
 * F; a point target has an empty coordinate list, the diagonal is phi = (id,
 * id) into a product chart), and the frame consists of pairs (t, s) where t
 * holds the F-frame coefficients of a section of phi*F and s the E-frame
 * coefficients of a section of E, both as rational functions on M.  The pair
 * (t, s) stands for the element t (+) s-bar of F x E-bar along the graph.
 *
 * On top of the representation the file provides:
 *   - diagonal_morphism:  TM -/-> E x E-bar  (v = a(x), x - y = a* mu),
 *   - graph_relation:     the standard lift of a polynomial map between
 *     (twisted) standard Courant algebroids, subject to phi* gamma_N = gamma_M,
 *   - manin_pair_morphism: TM -/-> d over a point, from an action backend,
 *   - compose:            middle-matching over the function field,
 *   - backward_image / forward_image: transport of (W, nabla) across a
 *     relation, producing the Psi-map and nabla = Psi* o (phi* nabla') o Psi,
 *   - transverse_pair / action_decomposition: the pseudo-Dirac structure
 *     W = gr(a|_E o (a|_{F-perp})*) induced by complementary pairs,
 *   - morphism_check / nabla_composition_check: the Lie-algebroid morphism
 *     property of Psi and the connection-composition identity.
 */

#include "pseudodirac.hpp"

namespace pdv {

namespace detail {

/// Pullback of a rational function along phi (empty phi = map from a point's
/// preimage chart onto a 0-dimensional target: the function is a constant).
inline Scalar pull_scalar(const Scalar& f, const std::vector<Poly>& phi, const ChartPtr& onto) {
    if (phi.empty()) return Scalar(onto, f.constant_value());
    return f.substitute(phi);
}

/// Pullback of a k-form along phi; positive-degree forms on a point vanish.
inline KForm pull_form(const KForm& a, const std::vector<Poly>& phi, const ChartPtr& onto) {
    if (phi.empty()) return KForm(onto, a.degree());
    return pullback(a, phi);
}

/// Composition of polynomial maps: (psi o phi)_b = psi_b(phi).
inline Poly pull_poly(const Poly& p, const std::vector<Poly>& phi, const ChartPtr& onto) {
    if (phi.empty()) return Poly::constant(onto, Scalar(p).constant_value());
    return p.substitute(phi);
}

/// Inverse of a square matrix over the function field; nullopt if singular.
inline std::optional<Matrix<Scalar>> invert(const Matrix<Scalar>& m) {
    const std::size_t n = m.rows();
    Matrix<Scalar> inv(n, n, m.zero(), m.one());
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Scalar> unit(n, m.zero());
        unit[j] = m.one();
        auto col = m.solve(unit);
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) inv.at(i, j) = (*col)[i];
    }
    return inv;
}

} // namespace detail

/// One frame element of a relation: target coefficients first.
struct RelationElement {
    std::vector<Scalar> t;  ///< coefficients over the target backend's frame
    std::vector<Scalar> s;  ///< coefficients over the source backend's frame
};

/// A Courant relation E -/-> F along the graph of a polynomial map, presented
/// by a frame of (target, source) coefficient pairs over the source base.
class CourantRelation {
public:
    CourantRelation(BackendPtr src, BackendPtr dst, std::vector<Poly> support,
                    std::vector<RelationElement> frame)
        : src_(std::move(src)), dst_(std::move(dst)), phi_(std::move(support)),
          frame_(std::move(frame)) {
        if (phi_.size() != dst_->chart()->dim())
            throw std::invalid_argument("relation support arity mismatch");
        for (const auto& p : phi_)
            require_same_chart(*p.chart(), *src_->chart(), "relation support");
        for (const auto& el : frame_) {
            if (el.t.size() != dst_->rank() || el.s.size() != src_->rank())
                throw std::invalid_argument("relation frame element shape mismatch");
            for (const auto& c : el.t) require_same_chart(*c.chart(), *src_->chart(), "relation");
            for (const auto& c : el.s) require_same_chart(*c.chart(), *src_->chart(), "relation");
        }
    }

    const BackendPtr& src() const { return src_; }
    const BackendPtr& dst() const { return dst_; }
    const std::vector<Poly>& support() const { return phi_; }
    const std::vector<RelationElement>& frame() const { return frame_; }
    std::size_t size() const { return frame_.size(); }

    Scalar pull(const Scalar& f) const { return detail::pull_scalar(f, phi_, src_->chart()); }
    KForm pull(const KForm& a) const { return detail::pull_form(a, phi_, src_->chart()); }
    std::vector<Scalar> pull(const std::vector<Scalar>& v) const {
        std::vector<Scalar> out;
        out.reserve(v.size());
        for (const auto& f : v) out.push_back(pull(f));
        return out;
    }

    /// The image phi(p) of a rational point of the source base.
    std::vector<Rational> map_point(const std::vector<Rational>& p) const {
        std::vector<Rational> out;
        out.reserve(phi_.size());
        for (const auto& q : phi_) out.push_back(Scalar(q).eval(p));
        return out;
    }

    /// The split pairing <t,t'>_F - <s,s'>_E of two frame elements (the
    /// F x E-bar metric restricted along the support).
    Scalar pairing(const RelationElement& x, const RelationElement& y) const {
        Scalar acc(src_->chart());
        for (std::size_t k = 0; k < dst_->rank(); ++k)
            for (std::size_t l = 0; l < dst_->rank(); ++l)
                if (dst_->gram().at(k, l) != 0 && !x.t[k].is_zero() && !y.t[l].is_zero())
                    acc += dst_->gram().at(k, l) * (x.t[k] * y.t[l]);
        for (std::size_t k = 0; k < src_->rank(); ++k)
            for (std::size_t l = 0; l < src_->rank(); ++l)
                if (src_->gram().at(k, l) != 0 && !x.s[k].is_zero() && !y.s[l].is_zero())
                    acc -= src_->gram().at(k, l) * (x.s[k] * y.s[l]);
        return acc;
    }

    /// Frame coefficients as a (size x (dst-rank + src-rank)) matrix, target
    /// coordinates first.
    Matrix<Scalar> coeff_matrix() const {
        const Scalar zero(src_->chart()), one(src_->chart(), Rational(1));
        Matrix<Scalar> m(size(), dst_->rank() + src_->rank(), zero, one);
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t k = 0; k < dst_->rank(); ++k) m.at(i, k) = frame_[i].t[k];
            for (std::size_t k = 0; k < src_->rank(); ++k)
                m.at(i, dst_->rank() + k) = frame_[i].s[k];
        }
        return m;
    }

    /// Lagrangian verdict: half rank, isotropy over the function field, frame
    /// independence, and full fibrewise rank at the given sample points.
    CheckReport check_lagrangian(const std::vector<std::vector<Rational>>& points = {}) const {
        CheckReport rep;
        if (2 * size() != src_->rank() + dst_->rank())
            rep.fail("relation frame rank " + std::to_string(size()) + " is not half of " +
                     std::to_string(src_->rank() + dst_->rank()));
        if (coeff_matrix().rank() != size())
            rep.fail("relation frame is dependent over the function field");
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i; j < size(); ++j)
                if (!pairing(frame_[i], frame_[j]).is_zero())
                    rep.fail("relation frame is not isotropic at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
        for (const auto& p : points) {
            try {
                if (linear_shadow(p).dim() != size()) {
                    std::ostringstream os;
                    os << "relation fibre rank drops at (";
                    for (std::size_t i = 0; i < p.size(); ++i)
                        os << (i ? "," : "") << format_rational(p[i]);
                    os << ")";
                    rep.fail(os.str());
                }
            } catch (const std::domain_error&) {
                continue; // sample hit a pole; try the next point
            }
        }
        return rep;
    }

    /// The linear-algebra shadow at a rational point: a linear relation
    /// F_{phi(p)} -/-> E_p with target coordinates first.
    LinearRelation<Rational> linear_shadow(const std::vector<Rational>& p) const {
        Matrix<Rational> gen(size(), dst_->rank() + src_->rank(), Rational(0), Rational(1));
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t k = 0; k < dst_->rank(); ++k) gen.at(i, k) = frame_[i].t[k].eval(p);
            for (std::size_t k = 0; k < src_->rank(); ++k)
                gen.at(i, dst_->rank() + k) = frame_[i].s[k].eval(p);
        }
        return LinearRelation<Rational>(dst_->rank(), src_->rank(),
                                        Subspace<Rational>::span(std::move(gen)));
    }

    /// The transpose relation F -/-> E along the inverse map; `inverse` must
    /// be a two-sided polynomial inverse of the support (verified).
    CourantRelation transposed(const std::vector<Poly>& inverse) const {
        if (inverse.size() != src_->chart()->dim())
            throw std::invalid_argument("inverse support arity mismatch");
        for (const auto& p : inverse)
            require_same_chart(*p.chart(), *dst_->chart(), "inverse support");
        for (std::size_t b = 0; b < phi_.size(); ++b)
            if (!(detail::pull_poly(phi_[b], inverse, dst_->chart()) ==
                  Poly::coordinate(dst_->chart(), b)))
                throw std::invalid_argument("support inverse fails phi o phi^-1 = id");
        for (std::size_t a = 0; a < inverse.size(); ++a)
            if (!(detail::pull_poly(inverse[a], phi_, src_->chart()) ==
                  Poly::coordinate(src_->chart(), a)))
                throw std::invalid_argument("support inverse fails phi^-1 o phi = id");
        std::vector<RelationElement> frame;
        for (const auto& el : frame_) {
            RelationElement rev;
            for (const auto& c : el.s)
                rev.t.push_back(detail::pull_scalar(c, inverse, dst_->chart()));
            for (const auto& c : el.t)
                rev.s.push_back(detail::pull_scalar(c, inverse, dst_->chart()));
            frame.push_back(std::move(rev));
        }
        return CourantRelation(dst_, src_, inverse, std::move(frame));
    }

private:
    BackendPtr src_, dst_;
    std::vector<Poly> phi_;
    std::vector<RelationElement> frame_;
};

/// The diagonal morphism TM -/-> E x E-bar of a backend E over M: the frame
/// realizes v = a(x), x - y = a* mu over the diagonal of M x M.
inline CourantRelation diagonal_morphism(const BackendPtr& e) {
    const ChartPtr& m = e->chart();
    ChartPtr prod = make_product_chart(m, "l_", m, "r_");
    BackendPtr dst = ProductBackend::make(e->transplant(prod, "l_"),
                                          ConjugateBackend::make(e->transplant(prod, "r_")));
    auto src = ExactBackend::make(m);
    std::vector<Poly> phi;
    for (std::size_t rep = 0; rep < 2; ++rep)
        for (std::size_t i = 0; i < m->dim(); ++i) phi.push_back(Poly::coordinate(m, i));
    std::vector<RelationElement> frame;
    const std::size_t r = e->rank();
    for (std::size_t k = 0; k < r; ++k) {
        RelationElement el;
        el.t.assign(2 * r, Scalar(m));
        el.t[k] = el.t[r + k] = Scalar(m, 1);  // x = y = e_k
        el.s = src->section_of(e->frame_anchor(k), KForm(m, 1)).coeffs;  // v = a(e_k)
        frame.push_back(std::move(el));
    }
    for (std::size_t a = 0; a < m->dim(); ++a) {
        RelationElement el;
        el.t = e->coanchor(KForm::coordinate_diff(m, a)).coeffs;  // x = a* dx_a, y = 0
        el.t.resize(2 * r, Scalar(m));
        el.s = src->coanchor(KForm::coordinate_diff(m, a)).coeffs;  // mu = dx_a
        frame.push_back(std::move(el));
    }
    return CourantRelation(src, dst, std::move(phi), std::move(frame));
}

/// The standard lift of a polynomial map phi : M -> N between (twisted)
/// standard Courant algebroids; requires phi* gamma_N = gamma_M.
inline CourantRelation graph_relation(const std::vector<Poly>& phi,
                                      const std::shared_ptr<const ExactBackend>& src,
                                      const std::shared_ptr<const ExactBackend>& dst) {
    const ChartPtr& m = src->chart();
    const ChartPtr& n = dst->chart();
    const KForm residual = detail::pull_form(dst->twist(), phi, m) - src->twist();
    if (!residual.is_zero())
        throw std::invalid_argument(
            "graph relation: phi* gamma_N - gamma_M is a nonzero 3-form");
    std::vector<RelationElement> frame;
    for (std::size_t a = 0; a < m->dim(); ++a) {
        RelationElement el;  // dphi(d/dx_a) ~ d/dx_a
        el.t.assign(2 * n->dim(), Scalar(m));
        for (std::size_t b = 0; b < n->dim(); ++b) el.t[b] = Scalar(phi[b]).derivative(a);
        el.s.assign(2 * m->dim(), Scalar(m));
        el.s[a] = Scalar(m, 1);
        frame.push_back(std::move(el));
    }
    for (std::size_t b = 0; b < n->dim(); ++b) {
        RelationElement el;  // dy_b ~ phi* dy_b
        el.t.assign(2 * n->dim(), Scalar(m));
        el.t[n->dim() + b] = Scalar(m, 1);
        el.s.assign(2 * m->dim(), Scalar(m));
        for (std::size_t a = 0; a < m->dim(); ++a)
            el.s[m->dim() + a] = Scalar(phi[b]).derivative(a);
        frame.push_back(std::move(el));
    }
    return CourantRelation(src, dst, phi, std::move(frame));
}

/// The Manin-pair morphism TM -/-> d (over a point) attached to an action
/// backend and a Lagrangian subalgebra g spanned by frame indices `g_idx`:
/// rho(xi) ~ (xi, 0) for xi in g and a*(mu) over a point is 0 ~ (rho* mu, mu).
inline CourantRelation manin_pair_morphism(const std::shared_ptr<const ActionBackend>& act,
                                           const std::vector<std::size_t>& g_idx) {
    const ChartPtr& m = act->chart();
    auto src = ExactBackend::make(m);
    auto dst = make_point_backend(act->algebra());
    std::vector<RelationElement> frame;
    for (std::size_t i : g_idx) {
        RelationElement el;
        el.t.assign(act->rank(), Scalar(m));
        el.t[i] = Scalar(m, 1);
        el.s = src->section_of(act->rho().at(i), KForm(m, 1)).coeffs;
        frame.push_back(std::move(el));
    }
    for (std::size_t a = 0; a < m->dim(); ++a) {
        RelationElement el;
        el.t = act->coanchor(KForm::coordinate_diff(m, a)).coeffs;
        el.s = src->coanchor(KForm::coordinate_diff(m, a)).coeffs;
        frame.push_back(std::move(el));
    }
    return CourantRelation(src, dst, {}, std::move(frame));
}

/// Composition left o right of relations E -/-> F -/-> G by matching the
/// middle components over the function field of the source base; the result
/// frame is in canonical (rref) form and the report carries the dimension
/// bookkeeping used for cleanness checks.
inline CourantRelation compose(const CourantRelation& left, const CourantRelation& right,
                               ComposeReport* report = nullptr) {
    const BackendPtr& mid = right.dst();
    if (mid->rank() != left.src()->rank() || !(mid->gram() == left.src()->gram()) ||
        *mid->chart() != *left.src()->chart())
        throw std::invalid_argument("relation composition: middle backend mismatch");
    const ChartPtr& m = right.src()->chart();
    const Scalar zero(m), one(m, 1);
    const std::size_t p = right.size(), q = left.size();
    Matrix<Scalar> match(mid->rank(), p + q, zero, one);
    for (std::size_t k = 0; k < mid->rank(); ++k) {
        for (std::size_t r = 0; r < p; ++r) match.at(k, r) = right.frame()[r].t[k];
        for (std::size_t c = 0; c < q; ++c)
            match.at(k, p + c) = zero - right.pull(left.frame()[c].s[k]);
    }
    const Matrix<Scalar> pairs = kernel_canonical(match);

    const std::size_t tn = left.dst()->rank(), sn = right.src()->rank();
    Matrix<Scalar> gen(pairs.rows(), tn + sn, zero, one);
    for (std::size_t r = 0; r < pairs.rows(); ++r) {
        for (std::size_t k = 0; k < tn; ++k)
            for (std::size_t c = 0; c < q; ++c)
                if (!pairs.at(r, p + c).is_zero())
                    gen.at(r, k) += pairs.at(r, p + c) * right.pull(left.frame()[c].t[k]);
        for (std::size_t k = 0; k < sn; ++k)
            for (std::size_t c = 0; c < p; ++c)
                if (!pairs.at(r, c).is_zero())
                    gen.at(r, tn + k) += pairs.at(r, c) * right.frame()[c].s[k];
    }
    gen.rref();
    std::vector<RelationElement> frame;
    for (std::size_t r = 0; r < gen.rows(); ++r) {
        RelationElement el;
        el.t.assign(gen.row(r).begin(), gen.row(r).begin() + static_cast<long>(tn));
        el.s.assign(gen.row(r).begin() + static_cast<long>(tn), gen.row(r).end());
        bool nonzero = false;
        for (const auto& c : gen.row(r))
            if (!c.is_zero()) nonzero = true;
        if (nonzero) frame.push_back(std::move(el));
    }
    std::vector<Poly> support;
    for (const auto& psi_b : left.support())
        support.push_back(detail::pull_poly(psi_b, right.support(), m));
    if (report) {
        report->dim_left = q;
        report->dim_right = p;
        report->dim_matched = pairs.rows();
        report->dim_result = frame.size();
    }
    return CourantRelation(right.src(), left.dst(), std::move(support), std::move(frame));
}

/// The result of transporting a pseudo-Dirac structure across a relation: the
/// image pair (W, nabla), the Psi-map against the two frames, and cleanness /
/// uniqueness diagnostics.
struct ImageResult {
    PseudoConnection conn;
    Matrix<Scalar> psi;  ///< psi(i, b): Psi(sigma_i) = sum_b psi(i,b) phi* sigma'_b
    CheckReport report;
};

/// Backward image of (W', nabla') on the target of R: solve the relation for
/// source sections related to phi*W' sections, read off the Psi-map, and set
/// nabla = Psi* o (phi* nabla') o Psi.  Throws on a structurally empty or
/// dependent image; soft cleanness failures go to the report.
inline ImageResult backward_image(const CourantRelation& r, const PseudoConnection& dst_conn,
                                  const std::vector<std::vector<Rational>>& sample_points = {}) {
    const BackendPtr& amb = dst_conn.backend();
    if (amb->rank() != r.dst()->rank() || !(amb->gram() == r.dst()->gram()) ||
        *amb->chart() != *r.dst()->chart())
        throw std::invalid_argument("backward image: connection lives in the wrong backend");
    const ChartPtr& m = r.src()->chart();
    const Scalar zero(m), one(m, 1);
    const std::size_t p = r.size(), kp = dst_conn.size();

    // Match r's target components against the pulled-back W' frame.
    Matrix<Scalar> match(r.dst()->rank(), p + kp, zero, one);
    for (std::size_t k = 0; k < r.dst()->rank(); ++k) {
        for (std::size_t c = 0; c < p; ++c) match.at(k, c) = r.frame()[c].t[k];
        for (std::size_t b = 0; b < kp; ++b)
            match.at(k, p + b) = zero - r.pull(dst_conn.w().section(b).coeffs[k]);
    }
    const Matrix<Scalar> pairs = kernel_canonical(match);

    // Canonicalize pairs (s, m): rows with s = 0 witness Psi non-uniqueness.
    const std::size_t sn = r.src()->rank();
    Matrix<Scalar> gen(pairs.rows(), sn + kp, zero, one);
    for (std::size_t row = 0; row < pairs.rows(); ++row) {
        for (std::size_t k = 0; k < sn; ++k)
            for (std::size_t c = 0; c < p; ++c)
                if (!pairs.at(row, c).is_zero())
                    gen.at(row, k) += pairs.at(row, c) * r.frame()[c].s[k];
        for (std::size_t b = 0; b < kp; ++b) gen.at(row, sn + b) = pairs.at(row, p + b);
    }
    gen.rref();
    CheckReport rep;
    std::vector<Section> w_frame;
    std::vector<std::vector<Scalar>> psi_rows;
    for (std::size_t row = 0; row < gen.rows(); ++row) {
        bool s_zero = true, m_zero = true;
        for (std::size_t k = 0; k < sn; ++k)
            if (!gen.at(row, k).is_zero()) s_zero = false;
        for (std::size_t b = 0; b < kp; ++b)
            if (!gen.at(row, sn + b).is_zero()) m_zero = false;
        if (s_zero) {
            if (!m_zero)
                rep.fail("backward image: Psi-map is not unique (a nonzero W' combination "
                         "is related to the zero section)");
            continue;
        }
        Section s = r.src()->zero_section();
        for (std::size_t k = 0; k < sn; ++k) s.coeffs[k] = gen.at(row, k);
        w_frame.push_back(std::move(s));
        psi_rows.emplace_back(gen.row(row).begin() + static_cast<long>(sn), gen.row(row).end());
    }
    if (w_frame.empty()) throw std::domain_error("backward image: empty image frame");
    const std::size_t k = w_frame.size();
    Matrix<Scalar> psi(k, kp, zero, one);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t b = 0; b < kp; ++b) psi.at(i, b) = psi_rows[i][b];

    // Cleanness surrogate: the fibrewise match kernel has the generic dim.
    for (const auto& pt : sample_points) {
        try {
            Matrix<Rational> mp(match.rows(), match.cols(), Rational(0), Rational(1));
            for (std::size_t i = 0; i < match.rows(); ++i)
                for (std::size_t j = 0; j < match.cols(); ++j)
                    mp.at(i, j) = match.at(i, j).eval(pt);
            const std::size_t fibre_dim = mp.cols() - mp.rank();
            if (fibre_dim != pairs.rows()) {
                std::ostringstream os;
                os << "backward image not clean at (";
                for (std::size_t i = 0; i < pt.size(); ++i)
                    os << (i ? "," : "") << format_rational(pt[i]);
                os << "): matched fibre dim " << fibre_dim << " vs generic " << pairs.rows();
                rep.fail(os.str());
            }
        } catch (const std::domain_error&) {
            continue; // sample hit a pole; try the next point
        }
    }

    // nabla = Psi* o (phi* nabla') o Psi on the image frame.
    const Matrix<Scalar> gp = dst_conn.w().gram();
    std::vector<std::vector<KForm>> a(k, std::vector<KForm>(k, KForm(m, 1)));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t b = 0; b < kp; ++b)
                for (std::size_t g = 0; g < kp; ++g) {
                    if (!psi.at(i, b).is_zero())
                        a[i][j] += psi.at(i, b) * psi.at(j, g) * r.pull(dst_conn.a(b, g));
                    if (!gp.at(b, g).is_zero())
                        a[i][j] += psi.at(j, g) * r.pull(gp.at(b, g)) *
                                   exterior_d(psi.at(i, b));
                }
    PseudoConnection conn(SubbundleFrame(r.src(), std::move(w_frame)), std::move(a));
    return ImageResult{std::move(conn), std::move(psi), std::move(rep)};
}

/// Forward image of (W, nabla) on the source of R along an invertible
/// support: transpose the relation and take the backward image.
inline ImageResult forward_image(const CourantRelation& r, const PseudoConnection& src_conn,
                                 const std::vector<Poly>& support_inverse,
                                 const std::vector<std::vector<Rational>>& sample_points = {}) {
    return backward_image(r.transposed(support_inverse), src_conn, sample_points);
}

/// The transverse-pair pseudo-Dirac structure of two complementary
/// pseudo-Dirac structures (E, nabla_E), (F, nabla_F) in one backend:
/// W = gr(a|_E o (a|_{F-perp})*) with the coordinate coframe, together with
/// the Psi-map into E x F-bar (the component in the conjugate copy is
/// x - a* dx_a = -(a|_{E-perp})* dx_a).
struct TransversePair {
    PseudoConnection conn;
    Matrix<Scalar> psi_e;  ///< psi_e(a, i): the E-component of W_a on E's frame
    Matrix<Scalar> psi_f;  ///< psi_f(a, j): the F-bar-component on F's frame
    CheckReport report;
};

inline TransversePair transverse_pair(const PseudoConnection& ce, const PseudoConnection& cf,
                                      const std::vector<std::vector<Rational>>& sample_points = {}) {
    if (ce.backend().get() != cf.backend().get())
        throw std::invalid_argument("transverse pair: structures must share one backend");
    const BackendPtr& amb = ce.backend();
    const ChartPtr& m = amb->chart();
    const std::size_t ne = ce.size(), nf = cf.size(), dim = m->dim();
    if (ne + nf != amb->rank())
        throw std::invalid_argument("transverse pair: ranks do not fill the backend");
    const Scalar zero(m), one(m, 1);

    // Dual bases: e^i in F-perp with <e_i, e^j> = delta, f^j in E-perp.
    auto dual_frame = [&](const SubbundleFrame& w, const std::vector<Section>& perp) {
        Matrix<Scalar> pair(w.size(), w.size(), zero, one);
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j)
                pair.at(i, j) = amb->pairing(w.section(i), perp[j]);
        auto inv = detail::invert(pair);
        if (!inv)
            throw std::invalid_argument("transverse pair: structures are not complementary "
                                        "(degenerate E x F-perp pairing)");
        std::vector<Section> duals;
        for (std::size_t i = 0; i < w.size(); ++i) {
            Section d = amb->zero_section();
            for (std::size_t kk = 0; kk < w.size(); ++kk)
                d = d + perp[kk] * inv->at(kk, i);
            duals.push_back(std::move(d));
        }
        return duals;
    };
    const std::vector<Section> e_dual = dual_frame(ce.w(), cf.w().orth_frame());
    const std::vector<Section> f_dual = dual_frame(cf.w(), ce.w().orth_frame());

    Matrix<Scalar> psi_e(dim, ne, zero, one), psi_f(dim, nf, zero, one);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t i = 0; i < ne; ++i) psi_e.at(a, i) = amb->anchor(e_dual[i]).comp(a);
        for (std::size_t j = 0; j < nf; ++j)
            psi_f.at(a, j) = zero - amb->anchor(f_dual[j]).comp(a);
    }

    auto exact = ExactBackend::make(m);
    std::vector<Section> frame;
    for (std::size_t a = 0; a < dim; ++a) {
        VectorField x(m);
        for (std::size_t i = 0; i < ne; ++i)
            x = x + amb->anchor(ce.w().section(i)) * psi_e.at(a, i);
        frame.push_back(exact->section_of(x, KForm::coordinate_diff(m, a)));
    }

    const Matrix<Scalar> ge = ce.w().gram(), gf = cf.w().gram();
    std::vector<std::vector<KForm>> a_mat(dim, std::vector<KForm>(dim, KForm(m, 1)));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            KForm f(m, 1);
            for (std::size_t i = 0; i < ne; ++i)
                for (std::size_t k = 0; k < ne; ++k) {
                    if (!psi_e.at(a, i).is_zero())
                        f += psi_e.at(b, k) * (psi_e.at(a, i) * ce.a(i, k));
                    if (!ge.at(i, k).is_zero())
                        f += psi_e.at(b, k) * ge.at(i, k) * exterior_d(psi_e.at(a, i));
                }
            for (std::size_t j = 0; j < nf; ++j)
                for (std::size_t l = 0; l < nf; ++l) {
                    if (!psi_f.at(a, j).is_zero())
                        f -= psi_f.at(b, l) * (psi_f.at(a, j) * cf.a(j, l));
                    if (!gf.at(j, l).is_zero())
                        f -= psi_f.at(b, l) * gf.at(j, l) * exterior_d(psi_f.at(a, j));
                }
            a_mat[a][b] = f;
        }

    CheckReport rep;
    // Leaf compatibility: a(W_a) lies in a(E) and a(F) (exactly).
    for (std::size_t a = 0; a < dim; ++a) {
        VectorField via_f(m);
        for (std::size_t j = 0; j < nf; ++j)
            via_f = via_f + amb->anchor(cf.w().section(j)) * psi_f.at(a, j);
        if (!(exact->vector_part(frame[a]) == via_f))
            rep.fail("transverse pair: anchor of W_" + std::to_string(a) +
                     " differs between the E and F presentations");
    }
    // Complementarity at sample points.
    for (const auto& pt : sample_points) {
        try {
            Matrix<Rational> stack(ne + nf, amb->rank(), Rational(0), Rational(1));
            for (std::size_t i = 0; i < ne; ++i)
                for (std::size_t kk = 0; kk < amb->rank(); ++kk)
                    stack.at(i, kk) = ce.w().section(i).coeffs[kk].eval(pt);
            for (std::size_t j = 0; j < nf; ++j)
                for (std::size_t kk = 0; kk < amb->rank(); ++kk)
                    stack.at(ne + j, kk) = cf.w().section(j).coeffs[kk].eval(pt);
            if (stack.rank() != amb->rank()) {
                std::ostringstream os;
                os << "E + F does not fill the fibre at (";
                for (std::size_t i = 0; i < pt.size(); ++i)
                    os << (i ? "," : "") << format_rational(pt[i]);
                os << ")";
                rep.fail(os.str());
            }
        } catch (const std::domain_error&) {
            continue;
        }
    }
    PseudoConnection conn(SubbundleFrame(exact, std::move(frame)), std::move(a_mat));
    return TransversePair{std::move(conn), std::move(psi_e), std::move(psi_f), std::move(rep)};
}

/// Decomposition of an action backend by a matched pair d = e (+) f of
/// subalgebras (given by constant coefficient rows): both halves carry the
/// flat pseudo-connection A = 0 and the transverse-pair construction endows
/// T*M ~ W with a Lie algebroid structure.
inline TransversePair action_decomposition(
    const std::shared_ptr<const ActionBackend>& act, const Matrix<Rational>& e_basis,
    const Matrix<Rational>& f_basis,
    const std::vector<std::vector<Rational>>& sample_points = {}) {
    const ChartPtr& m = act->chart();
    const QuadLieAlgebra& d = act->algebra();
    CheckReport pre;
    auto subalgebra_check = [&](const Matrix<Rational>& basis, const char* name) {
        const Subspace<Rational> span = Subspace<Rational>::span(basis);
        for (std::size_t r = 0; r < basis.rows(); ++r)
            for (std::size_t s = 0; s < basis.rows(); ++s) {
                std::vector<Rational> br(d.dim(), Rational(0));
                for (std::size_t i = 0; i < d.dim(); ++i)
                    for (std::size_t j = 0; j < d.dim(); ++j)
                        for (std::size_t k = 0; k < d.dim(); ++k)
                            br[k] += basis.at(r, i) * basis.at(s, j) * d.c(i, j, k);
                if (!span.contains(br))
                    pre.fail(std::string(name) + " is not closed under the bracket");
            }
    };
    subalgebra_check(e_basis, "e");
    subalgebra_check(f_basis, "f");
    Matrix<Rational> stack(e_basis.rows() + f_basis.rows(), d.dim(), Rational(0), Rational(1));
    for (std::size_t r = 0; r < e_basis.rows(); ++r)
        for (std::size_t k = 0; k < d.dim(); ++k) stack.at(r, k) = e_basis.at(r, k);
    for (std::size_t r = 0; r < f_basis.rows(); ++r)
        for (std::size_t k = 0; k < d.dim(); ++k) stack.at(e_basis.rows() + r, k) = f_basis.at(r, k);
    if (stack.rank() != d.dim() || e_basis.rows() + f_basis.rows() != d.dim())
        pre.fail("e and f are not a vector-space decomposition of d");
    auto coiso = act->coisotropic_stabilizers(sample_points);
    pre.failures.insert(pre.failures.end(), coiso.failures.begin(), coiso.failures.end());

    auto constant_frame = [&](const Matrix<Rational>& basis) {
        std::vector<Section> out;
        for (std::size_t r = 0; r < basis.rows(); ++r) {
            Section s = act->zero_section();
            for (std::size_t k = 0; k < d.dim(); ++k) s.coeffs[k] = Scalar(m, basis.at(r, k));
            out.push_back(std::move(s));
        }
        return out;
    };
    auto flat = [&](std::vector<Section> frame) {
        const std::size_t n = frame.size();
        return PseudoConnection(SubbundleFrame(act, std::move(frame)),
                                std::vector<std::vector<KForm>>(
                                    n, std::vector<KForm>(n, KForm(m, 1))));
    };
    TransversePair tp =
        transverse_pair(flat(constant_frame(e_basis)), flat(constant_frame(f_basis)),
                        sample_points);
    tp.report.failures.insert(tp.report.failures.begin(), pre.failures.begin(),
                              pre.failures.end());
    return tp;
}

/// Check that Psi : W -> phi*W' is a morphism of Lie algebroids over the
/// support of R: graph containment, anchor compatibility d phi o a_W =
/// a_{W'} o Psi, and the comorphism bracket identity, all exact.
inline CheckReport morphism_check(const CourantRelation& r, const PseudoConnection& src_conn,
                                  const PseudoConnection& dst_conn, const Matrix<Scalar>& psi) {
    CheckReport rep;
    const ChartPtr& m = r.src()->chart();
    const std::size_t k = src_conn.size(), kp = dst_conn.size();
    const Matrix<Scalar> rel = r.coeff_matrix().transposed();

    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Scalar> pair(r.dst()->rank() + r.src()->rank(), Scalar(m));
        for (std::size_t b = 0; b < kp; ++b)
            for (std::size_t l = 0; l < r.dst()->rank(); ++l)
                pair[l] += psi.at(i, b) * r.pull(dst_conn.w().section(b).coeffs[l]);
        for (std::size_t l = 0; l < r.src()->rank(); ++l)
            pair[r.dst()->rank() + l] = src_conn.w().section(i).coeffs[l];
        if (!rel.solve(pair))
            rep.fail("(Psi sigma_" + std::to_string(i) + ", sigma_" + std::to_string(i) +
                     ") is not in the relation");
    }

    for (std::size_t i = 0; i < k; ++i) {
        const VectorField ai = src_conn.backend()->anchor(src_conn.w().section(i));
        for (std::size_t b = 0; b < r.dst()->chart()->dim(); ++b) {
            Scalar lhs = ai.apply(Scalar(r.support()[b]));
            Scalar rhs(m);
            for (std::size_t c = 0; c < kp; ++c)
                rhs += psi.at(i, c) *
                       r.pull(dst_conn.backend()->anchor(dst_conn.w().section(c)).comp(b));
            if (!(lhs == rhs))
                rep.fail("anchor compatibility fails for sigma_" + std::to_string(i) +
                         " on coordinate " + r.dst()->chart()->coord(b));
        }
    }

    const auto cl = src_conn.closure_solve();
    const auto clp = dst_conn.closure_solve();
    if (!cl.report.ok() || !clp.report.ok()) {
        rep.fail("morphism check requires both modified brackets to close");
        return rep;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const VectorField ai = src_conn.backend()->anchor(src_conn.w().section(i));
            const VectorField aj = src_conn.backend()->anchor(src_conn.w().section(j));
            for (std::size_t g = 0; g < kp; ++g) {
                Scalar lhs(m);
                for (std::size_t l = 0; l < k; ++l)
                    if (!cl.c[i][j][l].is_zero()) lhs += cl.c[i][j][l] * psi.at(l, g);
                Scalar rhs = ai.apply(psi.at(j, g)) - aj.apply(psi.at(i, g));
                for (std::size_t b = 0; b < kp; ++b)
                    for (std::size_t c = 0; c < kp; ++c)
                        if (!clp.c[b][c][g].is_zero())
                            rhs += psi.at(i, b) * psi.at(j, c) * r.pull(clp.c[b][c][g]);
                if (!(lhs == rhs))
                    rep.fail("bracket compatibility fails at (" + std::to_string(i) + "," +
                             std::to_string(j) + ") component " + std::to_string(g));
            }
        }
    return rep;
}

/// The connection-composition identity <nabla_s sigma, tau> =
/// phi*<nabla'_(Psi sigma), Psi tau> (Leibniz-expanded on the target side)
/// for arbitrary coefficient probes; this is a different code path from the
/// frame-level construction in backward_image.
inline CheckReport nabla_composition_check(const CourantRelation& r,
                                           const PseudoConnection& src_conn,
                                           const PseudoConnection& dst_conn,
                                           const Matrix<Scalar>& psi,
                                           const std::vector<std::vector<Scalar>>& probes) {
    CheckReport rep;
    const ChartPtr& m = r.src()->chart();
    const std::size_t k = src_conn.size(), kp = dst_conn.size();
    const Matrix<Scalar> gp = dst_conn.w().gram();
    auto push = [&](const std::vector<Scalar>& u) {
        std::vector<Scalar> out(kp, Scalar(m));
        for (std::size_t b = 0; b < kp; ++b)
            for (std::size_t i = 0; i < k; ++i) out[b] += u[i] * psi.at(i, b);
        return out;
    };
    for (std::size_t x = 0; x < probes.size(); ++x)
        for (std::size_t y = 0; y < probes.size(); ++y) {
            const KForm lhs = src_conn.nabla_pair(probes[x], probes[y]);
            const std::vector<Scalar> up = push(probes[x]), vp = push(probes[y]);
            KForm rhs(m, 1);
            for (std::size_t b = 0; b < kp; ++b)
                for (std::size_t g = 0; g < kp; ++g) {
                    if (!up[b].is_zero() && !vp[g].is_zero())
                        rhs += up[b] * vp[g] * r.pull(dst_conn.a(b, g));
                    if (!gp.at(b, g).is_zero() && !vp[g].is_zero())
                        rhs += vp[g] * r.pull(gp.at(b, g)) * exterior_d(up[b]);
                }
            if (!(lhs == rhs))
                rep.fail("nabla composition identity fails at probes (" + std::to_string(x) +
                         "," + std::to_string(y) + ")");
        }
    return rep;
}

} // namespace pdv
