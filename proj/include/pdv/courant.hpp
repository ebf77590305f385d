#pragma once

/**
 * @file courant.hpp
 * @brief Courant algebroid backends over a global chart.
 *
 * A backend describes a Courant algebroid through data attached to a constant
 * generating frame (e_1..e_N):
 *   - a constant Gram matrix G_kl = <e_k, e_l> over Q,
 *   - the anchors a(e_k) as vector fields,
 *   - the brackets [[e_k, e_l]] as sections,
 *   - the coanchor a* : 1-forms -> sections.
 * The bracket of arbitrary sections sigma = sum f_k e_k is then evaluated by
 * bilinear expansion using the two Leibniz axioms:
 *   [[sigma, tau]] = sum f_k g_l [[e_k,e_l]] + a(sigma)(g_l) e_l
 *                    - a(tau)(f_k) e_k + a*( sum_k (sum_l G_kl g_l) d f_k ).
 * This derived formula is what makes conjugates and products (needed for
 * Courant relations) uniform: a product backend is just the union of the
 * factor frames with vanishing cross brackets and a blockwise coanchor.
 *
 * Supported variants: the (twisted) standard backend T M (+) T*M, the action
 * backend d x M for a quadratic Lie algebra acting with coisotropic
 * stabilizers, the point backend (an action backend over a 0-dim chart),
 * conjugates (metric negated) and binary products.
 */

#include "calculus.hpp"
#include "quadlie.hpp"

#include <functional>
#include <memory>

namespace pdv {

class CourantBackend;
using BackendPtr = std::shared_ptr<const CourantBackend>;

/// A section of a backend: coefficients over the generating frame.
struct Section {
    std::vector<Scalar> coeffs;

    Section() = default;
    explicit Section(std::vector<Scalar> c) : coeffs(std::move(c)) {}

    Section operator+(const Section& o) const {
        Section r = *this;
        for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] + o.coeffs[i];
        return r;
    }
    Section operator-(const Section& o) const {
        Section r = *this;
        for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i] - o.coeffs[i];
        return r;
    }
    Section operator-() const {
        Section r = *this;
        for (auto& c : r.coeffs) c = -c;
        return r;
    }
    Section operator*(const Scalar& f) const {
        Section r = *this;
        for (auto& c : r.coeffs) c = c * f;
        return r;
    }
    bool operator==(const Section& o) const { return coeffs == o.coeffs; }
    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }
};

inline Section operator*(const Scalar& f, const Section& s) { return s * f; }

class CourantBackend : public std::enable_shared_from_this<CourantBackend> {
public:
    virtual ~CourantBackend() = default;

    const ChartPtr& chart() const { return chart_; }
    std::size_t rank() const { return gram_.rows(); }
    const Matrix<Rational>& gram() const { return gram_; }
    const std::string& frame_label(std::size_t k) const { return labels_.at(k); }
    const VectorField& frame_anchor(std::size_t k) const { return anchors_.at(k); }
    const Section& frame_bracket(std::size_t k, std::size_t l) const {
        return brackets_.at(k).at(l);
    }

    /// Coanchor a* : Omega^1 -> sections, the metric transpose of the anchor.
    virtual Section coanchor(const KForm& mu) const = 0;

    /// Transplant this backend onto a larger chart whose coordinates carry
    /// the given prefix (used to build product backends).
    virtual BackendPtr transplant(const ChartPtr& target, const std::string& prefix) const = 0;

    Section zero_section() const {
        return Section(std::vector<Scalar>(rank(), Scalar(chart_)));
    }

    Section frame_section(std::size_t k) const {
        Section s = zero_section();
        s.coeffs.at(k) = Scalar(chart_, 1);
        return s;
    }

    VectorField anchor(const Section& s) const {
        check(s);
        VectorField X(chart_);
        for (std::size_t k = 0; k < rank(); ++k)
            if (!s.coeffs[k].is_zero()) X = X + anchors_[k] * s.coeffs[k];
        return X;
    }

    Scalar pairing(const Section& a, const Section& b) const {
        check(a);
        check(b);
        Scalar acc(chart_);
        for (std::size_t k = 0; k < rank(); ++k) {
            if (a.coeffs[k].is_zero()) continue;
            for (std::size_t l = 0; l < rank(); ++l) {
                if (gram_.at(k, l) == 0 || b.coeffs[l].is_zero()) continue;
                acc += gram_.at(k, l) * (a.coeffs[k] * b.coeffs[l]);
            }
        }
        return acc;
    }

    /// Dorfman bracket by frame expansion (see the file header).
    Section dorfman(const Section& s, const Section& t) const {
        check(s);
        check(t);
        Section out = zero_section();
        const VectorField as = anchor(s), at_ = anchor(t);
        for (std::size_t l = 0; l < rank(); ++l)
            if (!t.coeffs[l].is_zero()) out.coeffs[l] += as.apply(t.coeffs[l]);
        for (std::size_t k = 0; k < rank(); ++k)
            if (!s.coeffs[k].is_zero()) out.coeffs[k] -= at_.apply(s.coeffs[k]);
        for (std::size_t k = 0; k < rank(); ++k) {
            if (s.coeffs[k].is_zero()) continue;
            for (std::size_t l = 0; l < rank(); ++l) {
                if (t.coeffs[l].is_zero()) continue;
                const Section& b = brackets_[k][l];
                const Scalar fg = s.coeffs[k] * t.coeffs[l];
                for (std::size_t m = 0; m < rank(); ++m)
                    if (!b.coeffs[m].is_zero()) out.coeffs[m] += fg * b.coeffs[m];
            }
        }
        // exact term: a*( sum_k h_k df_k ), h_k = <e_k, tau>
        KForm mu(chart_, 1);
        for (std::size_t k = 0; k < rank(); ++k) {
            if (s.coeffs[k].is_zero()) continue;
            Scalar h(chart_);
            for (std::size_t l = 0; l < rank(); ++l)
                if (gram_.at(k, l) != 0) h += gram_.at(k, l) * t.coeffs[l];
            if (!h.is_zero()) mu += h * exterior_d(s.coeffs[k]);
        }
        if (!mu.is_zero()) out = out + coanchor(mu);
        return out;
    }

    /// Evaluate a section's coefficients at a rational point.
    std::vector<Rational> eval(const Section& s, const std::vector<Rational>& point) const {
        check(s);
        std::vector<Rational> out;
        out.reserve(rank());
        for (const auto& c : s.coeffs) out.push_back(c.eval(point));
        return out;
    }

protected:
    CourantBackend(ChartPtr chart, Matrix<Rational> gram, std::vector<std::string> labels,
                   std::vector<VectorField> anchors,
                   std::vector<std::vector<Section>> brackets)
        : chart_(std::move(chart)), gram_(std::move(gram)), labels_(std::move(labels)),
          anchors_(std::move(anchors)), brackets_(std::move(brackets)) {
        const std::size_t n = gram_.rows();
        if (labels_.size() != n || anchors_.size() != n || brackets_.size() != n)
            throw std::invalid_argument("backend frame data shape mismatch");
    }

    void check(const Section& s) const {
        if (s.coeffs.size() != rank())
            throw std::invalid_argument("section rank mismatch");
        for (const auto& c : s.coeffs) require_same_chart(*c.chart(), *chart_, "section");
    }

private:
    ChartPtr chart_;
    Matrix<Rational> gram_;
    std::vector<std::string> labels_;
    std::vector<VectorField> anchors_;
    std::vector<std::vector<Section>> brackets_;
};

namespace detail {

/// Rename a vector field onto a larger chart (components move to the
/// prefixed coordinates).
inline VectorField rename_vf(const VectorField& X, const ChartPtr& target,
                             const std::string& prefix) {
    VectorField Y(target);
    for (std::size_t i = 0; i < X.chart()->dim(); ++i)
        Y.comp(target->index_of(prefix + X.chart()->coord(i))) = X.comp(i).rename_to(target, prefix);
    return Y;
}

/// Rename a form onto a larger chart.
inline KForm rename_form(const KForm& a, const ChartPtr& target, const std::string& prefix) {
    KForm b(target, a.degree());
    for (const auto& [idx, s] : a.terms()) {
        KForm::Indices mapped;
        for (std::size_t i : idx) mapped.push_back(target->index_of(prefix + a.chart()->coord(i)));
        b.set(mapped, s.rename_to(target, prefix));
    }
    return b;
}

} // namespace detail

/// The (twisted) standard Courant algebroid T M (+) T*M with background
/// closed 3-form gamma.  `base` lists the chart coordinates that belong to
/// this backend's manifold (all of them unless the backend was transplanted
/// onto a product chart).
class ExactBackend final : public CourantBackend {
public:
    static std::shared_ptr<const ExactBackend> make(const ChartPtr& chart, KForm gamma) {
        std::vector<std::size_t> base(chart->dim());
        for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
        return std::shared_ptr<const ExactBackend>(
            new ExactBackend(chart, std::move(base), std::move(gamma)));
    }

    /// Untwisted convenience constructor.
    static std::shared_ptr<const ExactBackend> make(const ChartPtr& chart) {
        return make(chart, KForm(chart, 3));
    }

    const std::vector<std::size_t>& base_coords() const { return base_; }
    const KForm& twist() const { return gamma_; }
    std::size_t base_dim() const { return base_.size(); }

    /// Build a section from a vector field / 1-form pair (components along
    /// the base coordinates).
    Section section_of(const VectorField& X, const KForm& alpha) const {
        Section s = zero_section();
        for (std::size_t k = 0; k < base_.size(); ++k) {
            s.coeffs[k] = X.comp(base_[k]);
            s.coeffs[base_.size() + k] = alpha.coeff({base_[k]});
        }
        return s;
    }

    VectorField vector_part(const Section& s) const {
        VectorField X(chart());
        for (std::size_t k = 0; k < base_.size(); ++k) X.comp(base_[k]) = s.coeffs[k];
        return X;
    }

    KForm form_part(const Section& s) const {
        KForm a(chart(), 1);
        for (std::size_t k = 0; k < base_.size(); ++k)
            a.set({base_[k]}, s.coeffs[base_.size() + k]);
        return a;
    }

    Section coanchor(const KForm& mu) const override {
        if (mu.degree() != 1) throw std::invalid_argument("coanchor expects a 1-form");
        Section s = zero_section();
        for (std::size_t k = 0; k < base_.size(); ++k)
            s.coeffs[base_.size() + k] = mu.coeff({base_[k]});
        return s;
    }

    BackendPtr transplant(const ChartPtr& target, const std::string& prefix) const override {
        std::vector<std::size_t> base;
        for (std::size_t i : base_)
            base.push_back(target->index_of(prefix + chart()->coord(i)));
        return std::shared_ptr<const ExactBackend>(
            new ExactBackend(target, std::move(base), detail::rename_form(gamma_, target, prefix)));
    }

    /// The closed-form Dorfman bracket ([X,Y], L_X beta - i_Y d alpha
    /// + i_X i_Y gamma).  Only valid when the backend owns the whole chart;
    /// used as a cross-check against the frame expansion.
    Section dorfman_direct(const Section& s, const Section& t) const {
        if (base_.size() != chart()->dim())
            throw std::logic_error("direct Dorfman formula requires a full chart");
        const VectorField X = vector_part(s), Y = vector_part(t);
        const KForm alpha = form_part(s), beta = form_part(t);
        KForm out = lie_derivative(X, beta) - interior(Y, exterior_d(alpha));
        if (!gamma_.is_zero()) out += interior(X, interior(Y, gamma_));
        return section_of(vf_bracket(X, Y), out);
    }

private:
    ExactBackend(ChartPtr chart, std::vector<std::size_t> base, KForm gamma)
        : CourantBackend(chart, make_gram(base.size()), make_labels(chart, base),
                         make_anchors(chart, base), make_brackets(chart, base, gamma)),
          base_(std::move(base)), gamma_(std::move(gamma)) {
        require_same_chart(*gamma_.chart(), *chart, "twist form");
        if (gamma_.degree() != 3) throw std::invalid_argument("twist must be a 3-form");
        if (!exterior_d(gamma_).is_zero())
            throw std::invalid_argument("twist 3-form must be closed");
    }

    static Matrix<Rational> make_gram(std::size_t n) {
        Matrix<Rational> g(2 * n, 2 * n, Rational(0), Rational(1));
        for (std::size_t k = 0; k < n; ++k) g.at(k, n + k) = g.at(n + k, k) = 1;
        return g;
    }
    static std::vector<std::string> make_labels(const ChartPtr& chart,
                                                const std::vector<std::size_t>& base) {
        std::vector<std::string> ls;
        for (std::size_t i : base) ls.push_back("d/d" + chart->coord(i));
        for (std::size_t i : base) ls.push_back("d" + chart->coord(i));
        return ls;
    }
    static std::vector<VectorField> make_anchors(const ChartPtr& chart,
                                                 const std::vector<std::size_t>& base) {
        std::vector<VectorField> as;
        for (std::size_t i : base) as.push_back(VectorField::coordinate(chart, i));
        for (std::size_t k = 0; k < base.size(); ++k) as.push_back(VectorField(chart));
        return as;
    }
    static std::vector<std::vector<Section>> make_brackets(const ChartPtr& chart,
                                                           const std::vector<std::size_t>& base,
                                                           const KForm& gamma) {
        const std::size_t n = base.size();
        Section zero(std::vector<Scalar>(2 * n, Scalar(chart)));
        std::vector<std::vector<Section>> b(2 * n, std::vector<Section>(2 * n, zero));
        for (std::size_t k = 0; k < n && !gamma.is_zero(); ++k)
            for (std::size_t l = 0; l < n; ++l) {
                const KForm contraction = interior(VectorField::coordinate(chart, base[k]),
                                                   interior(VectorField::coordinate(chart, base[l]), gamma));
                for (std::size_t m = 0; m < n; ++m)
                    b[k][l].coeffs[n + m] = contraction.coeff({base[m]});
            }
        return b;
    }

    std::vector<std::size_t> base_;
    KForm gamma_;
};

/// The action Courant algebroid d x M for a quadratic Lie algebra d acting
/// through rho (one vector field per basis element).  The point backend is
/// the special case of a 0-dimensional chart.
class ActionBackend final : public CourantBackend {
public:
    static std::shared_ptr<const ActionBackend> make(const ChartPtr& chart, QuadLieAlgebra d,
                                                     std::vector<VectorField> rho) {
        return std::shared_ptr<const ActionBackend>(
            new ActionBackend(chart, std::move(d), std::move(rho)));
    }

    const QuadLieAlgebra& algebra() const { return algebra_; }
    const std::vector<VectorField>& rho() const { return rho_; }

    Section coanchor(const KForm& mu) const override {
        if (mu.degree() != 1) throw std::invalid_argument("coanchor expects a 1-form");
        const std::size_t n = rank();
        // <a*(mu), xi_j> = mu(rho(xi_j)): raise the index with the metric.
        std::vector<Scalar> rhs(n, Scalar(chart()));
        for (std::size_t j = 0; j < n; ++j) rhs[j] = interior(rho_[j], mu).coeff({});
        Section s = zero_section();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (ginv_.at(i, j) != 0) s.coeffs[i] += ginv_.at(i, j) * rhs[j];
        return s;
    }

    BackendPtr transplant(const ChartPtr& target, const std::string& prefix) const override {
        std::vector<VectorField> rho;
        for (const auto& X : rho_) rho.push_back(detail::rename_vf(X, target, prefix));
        return make(target, algebra_, std::move(rho));
    }

    /// Stabilizer subalgebra ker(rho(.)(m)) at a rational point.
    Subspace<Rational> stabilizer(const std::vector<Rational>& point) const {
        const std::size_t n = rank(), m = chart()->dim();
        Matrix<Rational> k(m, n, Rational(0), Rational(1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < m; ++a) k.at(a, i) = rho_[i].comp(a).eval(point);
        return Subspace<Rational>::span(kernel_canonical(k));
    }

    /// Check the coisotropy of stabilizers at the given sample points; this is
    /// the structural hypothesis for d x M to be a Courant algebroid.
    CheckReport coisotropic_stabilizers(const std::vector<std::vector<Rational>>& points) const {
        CheckReport rep;
        const BilForm<Rational> form = algebra_.form();
        for (const auto& p : points) {
            const auto stab = stabilizer(p);
            if (!form.is_coisotropic(stab)) {
                std::ostringstream os;
                os << "stabilizer not coisotropic at (";
                for (std::size_t i = 0; i < p.size(); ++i)
                    os << (i ? "," : "") << format_rational(p[i]);
                os << ")";
                rep.fail(os.str());
            }
        }
        return rep;
    }

private:
    ActionBackend(ChartPtr chart, QuadLieAlgebra d, std::vector<VectorField> rho)
        : CourantBackend(chart, d.metric(), d.labels(), rho, make_brackets(chart, d)),
          algebra_(std::move(d)), rho_(std::move(rho)), ginv_(algebra_.metric_inverse()) {
        if (rho_.size() != algebra_.dim())
            throw std::invalid_argument("action arity mismatch");
        for (const auto& X : rho_) require_same_chart(*X.chart(), *chart, "action");
    }

    static std::vector<std::vector<Section>> make_brackets(const ChartPtr& chart,
                                                           const QuadLieAlgebra& d) {
        const std::size_t n = d.dim();
        Section zero(std::vector<Scalar>(n, Scalar(chart)));
        std::vector<std::vector<Section>> b(n, std::vector<Section>(n, zero));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (d.c(i, j, k) != 0) b[i][j].coeffs[k] = Scalar(chart, d.c(i, j, k));
        return b;
    }

    QuadLieAlgebra algebra_;
    std::vector<VectorField> rho_;
    Matrix<Rational> ginv_;
};

/// A quadratic Lie algebra as a Courant algebroid over a point.
inline std::shared_ptr<const ActionBackend> make_point_backend(const QuadLieAlgebra& d) {
    ChartPtr pt = make_chart("pt", {});
    std::vector<VectorField> rho(d.dim(), VectorField(pt));
    return ActionBackend::make(pt, d, std::move(rho));
}

/// Conjugate backend: same anchor and bracket, negated metric.
class ConjugateBackend final : public CourantBackend {
public:
    static std::shared_ptr<const ConjugateBackend> make(BackendPtr inner) {
        return std::shared_ptr<const ConjugateBackend>(new ConjugateBackend(std::move(inner)));
    }

    const BackendPtr& inner() const { return inner_; }

    Section coanchor(const KForm& mu) const override { return -inner_->coanchor(mu); }

    BackendPtr transplant(const ChartPtr& target, const std::string& prefix) const override {
        return make(inner_->transplant(target, prefix));
    }

private:
    explicit ConjugateBackend(BackendPtr inner)
        : CourantBackend(inner->chart(), negate(inner->gram()), labels(*inner),
                         anchors(*inner), brackets(*inner)),
          inner_(std::move(inner)) {}

    static Matrix<Rational> negate(Matrix<Rational> g) {
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j) g.at(i, j) = -g.at(i, j);
        return g;
    }
    static std::vector<std::string> labels(const CourantBackend& b) {
        std::vector<std::string> ls;
        for (std::size_t k = 0; k < b.rank(); ++k) ls.push_back(b.frame_label(k) + "~");
        return ls;
    }
    static std::vector<VectorField> anchors(const CourantBackend& b) {
        std::vector<VectorField> as;
        for (std::size_t k = 0; k < b.rank(); ++k) as.push_back(b.frame_anchor(k));
        return as;
    }
    static std::vector<std::vector<Section>> brackets(const CourantBackend& b) {
        std::vector<std::vector<Section>> bs(b.rank());
        for (std::size_t k = 0; k < b.rank(); ++k)
            for (std::size_t l = 0; l < b.rank(); ++l) bs[k].push_back(b.frame_bracket(k, l));
        return bs;
    }

    BackendPtr inner_;
};

/// Product backend over a shared chart: frames concatenate, cross brackets
/// vanish, the coanchor acts blockwise.  Factors must already live on the
/// same chart (use transplant).
class ProductBackend final : public CourantBackend {
public:
    static std::shared_ptr<const ProductBackend> make(BackendPtr left, BackendPtr right) {
        return std::shared_ptr<const ProductBackend>(
            new ProductBackend(std::move(left), std::move(right)));
    }

    const BackendPtr& left() const { return left_; }
    const BackendPtr& right() const { return right_; }

    Section left_part(const Section& s) const {
        return Section(std::vector<Scalar>(s.coeffs.begin(),
                                           s.coeffs.begin() + static_cast<long>(left_->rank())));
    }
    Section right_part(const Section& s) const {
        return Section(std::vector<Scalar>(s.coeffs.begin() + static_cast<long>(left_->rank()),
                                           s.coeffs.end()));
    }
    Section combine(const Section& l, const Section& r) const {
        std::vector<Scalar> c = l.coeffs;
        c.insert(c.end(), r.coeffs.begin(), r.coeffs.end());
        return Section(std::move(c));
    }

    Section coanchor(const KForm& mu) const override {
        return combine(left_->coanchor(mu), right_->coanchor(mu));
    }

    BackendPtr transplant(const ChartPtr& target, const std::string& prefix) const override {
        return make(left_->transplant(target, prefix), right_->transplant(target, prefix));
    }

private:
    ProductBackend(BackendPtr left, BackendPtr right)
        : CourantBackend(left->chart(), gram(*left, *right), labels(*left, *right),
                         anchors(*left, *right), brackets(*left, *right)),
          left_(std::move(left)), right_(std::move(right)) {
        require_same_chart(*left_->chart(), *right_->chart(), "product backend");
    }

    static Matrix<Rational> gram(const CourantBackend& a, const CourantBackend& b) {
        const std::size_t n = a.rank() + b.rank();
        Matrix<Rational> g(n, n, Rational(0), Rational(1));
        for (std::size_t i = 0; i < a.rank(); ++i)
            for (std::size_t j = 0; j < a.rank(); ++j) g.at(i, j) = a.gram().at(i, j);
        for (std::size_t i = 0; i < b.rank(); ++i)
            for (std::size_t j = 0; j < b.rank(); ++j)
                g.at(a.rank() + i, a.rank() + j) = b.gram().at(i, j);
        return g;
    }
    static std::vector<std::string> labels(const CourantBackend& a, const CourantBackend& b) {
        std::vector<std::string> ls;
        for (std::size_t k = 0; k < a.rank(); ++k) ls.push_back("L:" + a.frame_label(k));
        for (std::size_t k = 0; k < b.rank(); ++k) ls.push_back("R:" + b.frame_label(k));
        return ls;
    }
    static std::vector<VectorField> anchors(const CourantBackend& a, const CourantBackend& b) {
        std::vector<VectorField> as;
        for (std::size_t k = 0; k < a.rank(); ++k) as.push_back(a.frame_anchor(k));
        for (std::size_t k = 0; k < b.rank(); ++k) as.push_back(b.frame_anchor(k));
        return as;
    }
    static std::vector<std::vector<Section>> brackets(const CourantBackend& a,
                                                      const CourantBackend& b) {
        const std::size_t na = a.rank(), nb = b.rank(), n = na + nb;
        const ChartPtr chart = a.chart();
        Section zero(std::vector<Scalar>(n, Scalar(chart)));
        std::vector<std::vector<Section>> bs(n, std::vector<Section>(n, zero));
        auto embed_left = [&](const Section& s) {
            Section r = zero;
            for (std::size_t m = 0; m < na; ++m) r.coeffs[m] = s.coeffs[m];
            return r;
        };
        auto embed_right = [&](const Section& s) {
            Section r = zero;
            for (std::size_t m = 0; m < nb; ++m) r.coeffs[na + m] = s.coeffs[m];
            return r;
        };
        for (std::size_t k = 0; k < na; ++k)
            for (std::size_t l = 0; l < na; ++l) bs[k][l] = embed_left(a.frame_bracket(k, l));
        for (std::size_t k = 0; k < nb; ++k)
            for (std::size_t l = 0; l < nb; ++l)
                bs[na + k][na + l] = embed_right(b.frame_bracket(k, l));
        return bs;
    }

    BackendPtr left_, right_;
};

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

/// Verify the Courant algebroid axioms on the given probe sections and probe
/// functions, exactly:
///   c1  Jacobi (Leibniz form) of the Dorfman bracket,
///   c2  a(s1)<s2,s3> = <[[s1,s2]],s3> + <s2,[[s1,s3]]>,
///   c3  [[s1,s2]] + [[s2,s1]] = a* d <s1,s2>,
///   c4  [[s1, f s2]] = f [[s1,s2]] + (a(s1) f) s2,
///   c5  [[f s1, s2]] = f [[s1,s2]] - (a(s2) f) s1 + <s1,s2> a*(df),
///   c6  a([[s1,s2]]) = [a(s1), a(s2)],
/// plus a o a* = 0 on coordinate differentials.
inline CheckReport verify_axioms(const CourantBackend& e, const std::vector<Section>& probes,
                                 const std::vector<Scalar>& probe_fns) {
    CheckReport rep;
    const std::size_t n = probes.size();
    auto name = [&](std::size_t i) { return "probe[" + std::to_string(i) + "]"; };

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Section bij = e.dorfman(probes[i], probes[j]);
            // c3
            const Section sym = bij + e.dorfman(probes[j], probes[i]);
            if (!(sym == e.coanchor(exterior_d(e.pairing(probes[i], probes[j])))))
                rep.fail("c3 fails at (" + name(i) + "," + name(j) + ")");
            // c6
            if (!(e.anchor(bij) == vf_bracket(e.anchor(probes[i]), e.anchor(probes[j]))))
                rep.fail("c6 fails at (" + name(i) + "," + name(j) + ")");
            for (std::size_t k = 0; k < n; ++k) {
                // c1
                const Section lhs = e.dorfman(probes[i], e.dorfman(probes[j], probes[k]));
                const Section rhs = e.dorfman(bij, probes[k]) +
                                    e.dorfman(probes[j], e.dorfman(probes[i], probes[k]));
                if (!(lhs == rhs))
                    rep.fail("c1 fails at (" + name(i) + "," + name(j) + "," + name(k) + ")");
                // c2
                const Scalar l2 = e.anchor(probes[i]).apply(e.pairing(probes[j], probes[k]));
                const Scalar r2 = e.pairing(bij, probes[k]) +
                                  e.pairing(probes[j], e.dorfman(probes[i], probes[k]));
                if (!(l2 == r2))
                    rep.fail("c2 fails at (" + name(i) + "," + name(j) + "," + name(k) + ")");
            }
            // c4 / c5
            for (const Scalar& f : probe_fns) {
                const Section l4 = e.dorfman(probes[i], probes[j] * f);
                const Section r4 = e.dorfman(probes[i], probes[j]) * f +
                                   probes[j] * e.anchor(probes[i]).apply(f);
                if (!(l4 == r4)) rep.fail("c4 fails at (" + name(i) + "," + name(j) + ")");
                const Section l5 = e.dorfman(probes[i] * f, probes[j]);
                const Section r5 = e.dorfman(probes[i], probes[j]) * f -
                                   probes[i] * e.anchor(probes[j]).apply(f) +
                                   e.coanchor(exterior_d(f)) * e.pairing(probes[i], probes[j]);
                if (!(l5 == r5)) rep.fail("c5 fails at (" + name(i) + "," + name(j) + ")");
            }
        }
    for (std::size_t a = 0; a < e.chart()->dim(); ++a) {
        const KForm dxa = KForm::coordinate_diff(e.chart(), a);
        if (!e.anchor(e.coanchor(dxa)).is_zero())
            rep.fail("a o a* != 0 on d" + e.chart()->coord(a));
    }
    return rep;
}

} // namespace pdv
