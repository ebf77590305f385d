#include <doctest.h>

#include <pdv/constructions.hpp>

#include <random>

using namespace pdv;

namespace {

Scalar random_scalar(const ChartPtr& c, std::mt19937& rng, unsigned max_deg = 1) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<unsigned> deg(0, max_deg);
    Poly p(c);
    for (unsigned t = 0; t < 2; ++t) {
        Exponents e(c->dim());
        for (auto& x : e) x = deg(rng);
        p.add_term(e, Rational(coeff(rng)));
    }
    return Scalar(p);
}

std::vector<Section> random_probes(const CourantBackend& e, std::size_t count,
                                   std::mt19937& rng) {
    std::vector<Section> probes;
    for (std::size_t i = 0; i < count; ++i) {
        Section s = e.zero_section();
        for (auto& c : s.coeffs) c = random_scalar(e.chart(), rng);
        probes.push_back(std::move(s));
    }
    return probes;
}

std::vector<std::vector<Rational>> sample_pts3() {
    return {{Rational(0), Rational(0), Rational(0)},
            {Rational(1), Rational(-1), Rational(2)}};
}

bool same_span(const SubbundleFrame& a, const SubbundleFrame& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!b.solve(a.section(i))) return false;
    return true;
}

} // namespace

TEST_CASE("exact prolongation: lift calculus and axioms on the tangent chart") {
    auto c = make_chart("M", {"x", "y"});
    auto e = ExactBackend::make(c);
    auto pro = tangent_prolongation(e);
    CHECK(pro.tangent->dim() == 4);
    CHECK(pro.total->rank() == 8);

    std::mt19937 rng(811);
    auto probes = random_probes(*e, 3, rng);
    auto rep = verify_lift_calculus(pro, probes);
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok());

    // the tangent prolongation is itself a Courant backend in good standing
    auto tprobes = random_probes(*pro.total, 2, rng);
    auto arep = verify_axioms(*pro.total, tprobes,
                              {random_scalar(pro.tangent, rng, 2)});
    for (const auto& f : arep.failures) MESSAGE(f);
    CHECK(arep.ok());
}

TEST_CASE("twisted exact prolongation: the lifted twist drives the lift calculus") {
    auto c = make_chart("M", {"x", "y", "z"});
    KForm gamma(c, 3);
    gamma.set({0, 1, 2}, Scalar(c, 1) + Scalar::coordinate(c, 0));
    auto e = ExactBackend::make(c, gamma);
    auto pro = tangent_prolongation(e);
    // the total twist is gamma_T (closed by construction, checked by make)
    auto tot = std::dynamic_pointer_cast<const ExactBackend>(pro.total);
    REQUIRE(tot);
    CHECK(tot->twist() == lift_form_tangent(gamma, pro.tangent));

    std::mt19937 rng(822);
    auto rep = verify_lift_calculus(pro, random_probes(*e, 3, rng));
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok());
}

TEST_CASE("action prolongation: the tangent double acts by lifts") {
    auto c = make_chart("g*", {"p", "q"});
    auto a = aff1_dual_action(c);
    auto pro = tangent_prolongation(a);
    CHECK(pro.total->rank() == 8);

    std::mt19937 rng(833);
    auto rep = verify_lift_calculus(pro, random_probes(*a, 3, rng));
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.ok());

    auto arep = verify_axioms(*pro.total, random_probes(*pro.total, 2, rng),
                              {random_scalar(pro.tangent, rng, 1)});
    for (const auto& f : arep.failures) MESSAGE(f);
    CHECK(arep.ok());
}

TEST_CASE("VB-Dirac of the metric connection: Lagrangian, involutive, and the "
          "connection is recovered") {
    auto c = make_chart("M", {"x", "y", "z"});
    auto e = ExactBackend::make(c);
    KForm omega(c, 2);
    omega.set({1, 2}, Scalar::coordinate(c, 0));
    auto conn = metric_connection(e, omega);
    REQUIRE(conn.is_pseudo_dirac(sample_pts3()).ok());

    auto pro = tangent_prolongation(e);
    auto vb = build_vb_dirac(pro, conn);
    CHECK(vb.frame.size() == 6);
    CHECK(vb.side_rank == 3);
    auto lrep = check_lagrangian(vb.frame);
    for (const auto& f : lrep.failures) MESSAGE(f);
    CHECK(lrep.ok());
    auto irep = check_involutive(vb.frame);
    for (const auto& f : irep.failures) MESSAGE(f);
    CHECK(irep.ok());

    // the pseudo-connection is recovered from the VB frame
    auto rec = extract_connection(pro, conn.w(), vb);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(rec[i][j] == conn.a(i, j));

    // lift independence: a different complement choice spans the same
    // subbundle and recovers the same connection
    auto vb2 = build_vb_dirac(pro, conn, /*alternate_complement=*/true);
    CHECK(same_span(vb.frame, vb2.frame));
    CHECK(same_span(vb2.frame, vb.frame));
    auto rec2 = extract_connection(pro, conn.w(), vb2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(rec2[i][j] == conn.a(i, j));
}

TEST_CASE("VB-Dirac dichotomy: Dirac data is involutive, a Jacobiator is not") {
    auto c = make_chart("M", {"x", "y", "z"});
    auto e = ExactBackend::make(c);
    auto pro = tangent_prolongation(e);

    // Heisenberg Poisson cotangent data: involutive VB-Dirac structure
    auto p = bivector_matrix(c, {{0, 1, Scalar::coordinate(c, 2)}});
    auto poisson = cotangent_connection(bivector_algebroid(c, p), e);
    auto vb = build_vb_dirac(pro, poisson);
    CHECK(check_lagrangian(vb.frame).ok());
    CHECK(check_involutive(vb.frame).ok());

    // a bundle of non-Lie algebras lifts to a Lagrangian but non-involutive
    // subbundle: the Jacobiator shows up as Dorfman brackets leaving the span
    std::vector<std::vector<std::vector<Rational>>> cc(
        3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3, 0)));
    cc[0][1][2] = 1;
    cc[1][0][2] = -1;
    cc[0][2][0] = 1;
    cc[2][0][0] = -1;
    auto broken = bundle_of_algebras(e, cc);
    REQUIRE_FALSE(broken.is_pseudo_dirac(sample_pts3()).ok());
    auto vbad = build_vb_dirac(pro, broken);
    CHECK(check_lagrangian(vbad.frame).ok());
    auto irep = check_involutive(vbad.frame);
    CHECK_FALSE(irep.ok());
    CHECK(irep.failures[0].find("leaves the span") != std::string::npos);
}
