#pragma once

/**
 * @file tangent.hpp
 * @brief Tangent prolongation of Courant backends, section lifts, and the
 * VB-Dirac structure associated with a pseudo-Dirac subbundle.
 *
 * The tangent prolongation of a Courant algebroid E over M is a Courant
 * algebroid TE over TM.  For the standard backend it is the standard backend
 * of the tangent chart twisted by the tangent lift of the twist; for an
 * action backend it is the action of the tangent double of the quadratic Lie
 * algebra, acting through complete and vertical lifts.  Sections lift in two
 * flavours, tangent (T) and core/vertical (C), and the calculus of lifts
 * (verify_lift_calculus) relates brackets, pairings and anchors of lifts to
 * lifts of brackets, pairings and anchors.
 *
 * A pseudo-Dirac structure (W, nabla) on E determines a Lagrangian subbundle
 * of TE spanned by the corrected tangent lifts
 *   sigma-tilde_i = (sigma_i)_T - sum_a v_a (e_ia)_C,   <e_ia, sigma_j> = A_ij(d/dx_a),
 * together with core lifts of a frame of W-perp; it is involutive under the
 * Dorfman bracket precisely when (W, nabla) is pseudo-Dirac.
 */

#include "pseudodirac.hpp"

#include <functional>

namespace pdv {

/// A backend together with its tangent prolongation and the two section lifts.
struct TangentProlongation {
    BackendPtr base;
    BackendPtr total;
    ChartPtr tangent; ///< chart of the total backend, (x_1..x_n, v_1..v_n)
    std::function<Section(const Section&)> lift_t; ///< tangent lift
    std::function<Section(const Section&)> lift_c; ///< core (vertical) lift
};

/// Tangent prolongation of the standard backend: the standard backend of the
/// tangent chart, twisted by the tangent lift of the twist.  Sections lift
/// componentwise: (X, alpha)_T = (X_T, alpha_T), (X, alpha)_C = (X_C, alpha_C).
inline TangentProlongation tangent_prolongation(const std::shared_ptr<const ExactBackend>& e) {
    if (2 * e->chart()->dim() != e->rank())
        throw std::invalid_argument("tangent prolongation needs a full-chart standard backend");
    TangentProlongation pro;
    pro.base = e;
    pro.tangent = make_tangent_chart(e->chart());
    auto total = ExactBackend::make(pro.tangent, lift_form_tangent(e->twist(), pro.tangent));
    pro.total = total;
    const ChartPtr tc = pro.tangent;
    pro.lift_t = [e, total, tc](const Section& s) {
        return total->section_of(lift_vf_complete(e->vector_part(s), tc),
                                 lift_form_tangent(e->form_part(s), tc));
    };
    pro.lift_c = [e, total, tc](const Section& s) {
        return total->section_of(lift_vf_vertical(e->vector_part(s), tc),
                                 lift_form_base(e->form_part(s), tc));
    };
    return pro;
}

/// Tangent prolongation of an action backend: the tangent double T(d) =
/// double_algebra(d) acts on the tangent chart by complete lifts on the first
/// copy and vertical lifts on the second.  A section sum f_i xi_i lifts as
/// sum (f_i)_base (xi_i, 0) + (f_i)_tangent (0, xi_i); the core lift places
/// base-lifted coefficients on the second copy.
inline TangentProlongation tangent_prolongation(const std::shared_ptr<const ActionBackend>& a) {
    TangentProlongation pro;
    pro.base = a;
    pro.tangent = make_tangent_chart(a->chart());
    const std::size_t n = a->rank();
    std::vector<VectorField> lifted;
    for (std::size_t i = 0; i < n; ++i)
        lifted.push_back(lift_vf_complete(a->rho()[i], pro.tangent));
    for (std::size_t i = 0; i < n; ++i)
        lifted.push_back(lift_vf_vertical(a->rho()[i], pro.tangent));
    auto total = ActionBackend::make(pro.tangent, double_algebra(a->algebra()), lifted);
    pro.total = total;
    const ChartPtr tc = pro.tangent;
    pro.lift_t = [n, total, tc](const Section& s) {
        Section out = total->zero_section();
        for (std::size_t i = 0; i < n; ++i) {
            out.coeffs[i] = lift_scalar_base(s.coeffs[i], tc);
            out.coeffs[n + i] = lift_scalar_tangent(s.coeffs[i], tc);
        }
        return out;
    };
    pro.lift_c = [n, total, tc](const Section& s) {
        Section out = total->zero_section();
        for (std::size_t i = 0; i < n; ++i)
            out.coeffs[n + i] = lift_scalar_base(s.coeffs[i], tc);
        return out;
    };
    return pro;
}

/// The calculus of lifts on given base probe sections:
///   [[s_T, t_T]] = [[s,t]]_T, [[s_T, t_C]] = [[s,t]]_C, [[s_C, t_C]] = 0,
///   <s_T, t_T> = <s,t>_tangent, <s_T, t_C> = <s,t>_base, <s_C, t_C> = 0,
///   a(s_T) = a(s)_complete, a(s_C) = a(s)_vertical.
inline CheckReport verify_lift_calculus(const TangentProlongation& pro,
                                        const std::vector<Section>& probes) {
    CheckReport rep;
    const auto& tot = *pro.total;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const Section& s = probes[i];
        if (!(tot.anchor(pro.lift_t(s)) == lift_vf_complete(pro.base->anchor(s), pro.tangent)))
            rep.fail("anchor of tangent lift is not the complete lift (probe " +
                     std::to_string(i) + ")");
        if (!(tot.anchor(pro.lift_c(s)) == lift_vf_vertical(pro.base->anchor(s), pro.tangent)))
            rep.fail("anchor of core lift is not the vertical lift (probe " +
                     std::to_string(i) + ")");
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const Section& t = probes[j];
            const std::string at = " (probes " + std::to_string(i) + "," + std::to_string(j) + ")";
            const Scalar st = pro.base->pairing(s, t);
            if (!(tot.pairing(pro.lift_t(s), pro.lift_t(t)) ==
                  lift_scalar_tangent(st, pro.tangent)))
                rep.fail("<s_T, t_T> != <s,t>_T" + at);
            if (!(tot.pairing(pro.lift_t(s), pro.lift_c(t)) == lift_scalar_base(st, pro.tangent)))
                rep.fail("<s_T, t_C> != <s,t>_C" + at);
            if (!tot.pairing(pro.lift_c(s), pro.lift_c(t)).is_zero())
                rep.fail("<s_C, t_C> != 0" + at);
            const Section br = pro.base->dorfman(s, t);
            if (!(tot.dorfman(pro.lift_t(s), pro.lift_t(t)) == pro.lift_t(br)))
                rep.fail("[[s_T, t_T]] != [[s,t]]_T" + at);
            if (!(tot.dorfman(pro.lift_t(s), pro.lift_c(t)) == pro.lift_c(br)))
                rep.fail("[[s_T, t_C]] != [[s,t]]_C" + at);
            if (!tot.dorfman(pro.lift_c(s), pro.lift_c(t)).is_zero())
                rep.fail("[[s_C, t_C]] != 0" + at);
        }
    }
    return rep;
}

namespace detail {

/// Particular solution of M c = rhs with free variables set to zero; with
/// `reverse`, the column preference is reversed, giving a second deterministic
/// complement choice.
template <class F>
std::optional<std::vector<F>> solve_pref(const Matrix<F>& m, const std::vector<F>& rhs,
                                         bool reverse) {
    if (!reverse) return m.solve(rhs);
    Matrix<F> rev(m.rows(), m.cols(), m.zero(), m.one());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) rev.at(r, c) = m.at(r, m.cols() - 1 - c);
    auto sol = rev.solve(rhs);
    if (!sol) return std::nullopt;
    std::vector<F> out(m.cols(), m.zero());
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] = (*sol)[m.cols() - 1 - c];
    return out;
}

} // namespace detail

/// The linear (VB-) subbundle of the tangent prolongation attached to a
/// subbundle-with-pseudo-connection: corrected tangent lifts of the W frame
/// followed by core lifts of a W-perp frame.
struct VBDirac {
    SubbundleFrame frame;
    std::size_t side_rank; ///< number of corrected tangent lifts (= rank W)
};

inline VBDirac build_vb_dirac(const TangentProlongation& pro, const PseudoConnection& conn,
                              bool alternate_complement = false) {
    if (pro.base != conn.backend())
        throw std::invalid_argument("pseudo-connection lives on a different backend");
    const ChartPtr& base_chart = pro.base->chart();
    const std::size_t n = base_chart->dim();
    const std::size_t k = conn.size();

    // <e_l, sigma_j> as a matrix over the function field: (C G)_{j,l}
    const Scalar zero(base_chart), one(base_chart, Rational(1));
    Matrix<Scalar> g(pro.base->rank(), pro.base->rank(), zero, one);
    for (std::size_t r = 0; r < pro.base->rank(); ++r)
        for (std::size_t c = 0; c < pro.base->rank(); ++c)
            g.at(r, c) = Scalar(base_chart, pro.base->gram().at(r, c));
    const Matrix<Scalar> m = conn.w().coeff_matrix() * g;

    std::vector<Section> frame;
    for (std::size_t i = 0; i < k; ++i) {
        Section lifted = pro.lift_t(conn.w().section(i));
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<Scalar> rhs(k, zero);
            for (std::size_t j = 0; j < k; ++j) rhs[j] = conn.a(i, j).coeff({a});
            auto e_ia = detail::solve_pref(m, rhs, alternate_complement);
            if (!e_ia)
                throw std::domain_error("no section pairs to the connection values");
            Section corr = pro.base->zero_section();
            corr.coeffs = *e_ia;
            lifted = lifted - Scalar::coordinate(pro.tangent, n + a) * pro.lift_c(corr);
        }
        frame.push_back(std::move(lifted));
    }
    for (const auto& perp : conn.w().orth_frame()) frame.push_back(pro.lift_c(perp));
    return VBDirac{SubbundleFrame(pro.total, std::move(frame)), k};
}

/// Lagrangian check over the function field: pairwise pairings vanish and the
/// frame has half the backend rank.
inline CheckReport check_lagrangian(const SubbundleFrame& f) {
    CheckReport rep;
    if (2 * f.size() != f.backend()->rank())
        rep.fail("frame rank " + std::to_string(f.size()) + " is not half of " +
                 std::to_string(f.backend()->rank()));
    const auto gram = f.gram();
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i; j < f.size(); ++j)
            if (!gram.at(i, j).is_zero())
                rep.fail("frame is not isotropic at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
    return rep;
}

/// Involutivity of a frame under the Dorfman bracket over the function field.
inline CheckReport check_involutive(const SubbundleFrame& f) {
    CheckReport rep;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j)
            if (!f.solve(f.backend()->dorfman(f.section(i), f.section(j))))
                rep.fail("Dorfman bracket [" + std::to_string(i) + "," + std::to_string(j) +
                         "] leaves the span");
    return rep;
}

/// Recover the pseudo-connection from a VB frame: by metric compatibility
/// <sigma-tilde_i, (sigma_j)_T> = sum_a v_a (A_ji(d/dx_a))_base, so A is read
/// off from the v-derivatives of the pairings against uncorrected lifts.
inline std::vector<std::vector<KForm>> extract_connection(const TangentProlongation& pro,
                                                          const SubbundleFrame& w_base,
                                                          const VBDirac& vb) {
    const ChartPtr& base_chart = pro.base->chart();
    const std::size_t n = base_chart->dim();
    const std::size_t k = vb.side_rank;
    std::vector<std::vector<KForm>> a(k, std::vector<KForm>(k, KForm(base_chart, 1)));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const Scalar p =
                pro.total->pairing(vb.frame.section(i), pro.lift_t(w_base.section(j)));
            for (std::size_t c = 0; c < n; ++c)
                a[j][i].add({c}, p.derivative(n + c).rename_to(base_chart));
        }
    return a;
}

} // namespace pdv
