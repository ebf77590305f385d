#include <doctest.h>

#include <pdv/quadlie.hpp>

using namespace pdv;

namespace {

Matrix<Rational> qm(std::size_t n) { return Matrix<Rational>(n, n, Rational(0), Rational(1)); }

Subspace<Rational> span_rows(std::vector<std::vector<Rational>> rows, std::size_t cols) {
    if (rows.empty()) return Subspace<Rational>::zero(cols, Rational(0), Rational(1));
    return Subspace<Rational>::span(Matrix<Rational>(std::move(rows), Rational(0), Rational(1)));
}

} // namespace

TEST_CASE("sl2 passes full verification") {
    auto d = sl2();
    auto rep = d.verify();
    CHECK(rep.ok());
    // frozen: [e,f] = h, <h,h> = 2
    auto br = d.bracket({Rational(1), Rational(0), Rational(0)},
                        {Rational(0), Rational(0), Rational(1)});
    CHECK(br == std::vector<Rational>({Rational(0), Rational(1), Rational(0)}));
    CHECK(d.pairing({Rational(0), Rational(1), Rational(0)},
                    {Rational(0), Rational(1), Rational(0)}) == Rational(2));
}

TEST_CASE("broken structure constants are reported with witnesses") {
    // perturb sl2: set [e,f] = h + e; Jacobi and invariance both break
    const std::size_t n = 3;
    std::vector<std::vector<std::vector<Rational>>> c(
        n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0)));
    c[1][0][0] = 2;
    c[0][1][0] = -2;
    c[1][2][2] = -2;
    c[2][1][2] = 2;
    c[0][2][1] = 1;
    c[2][0][1] = -1;
    c[0][2][0] = 1; // the perturbation
    c[2][0][0] = -1;
    auto g = qm(3);
    g.at(0, 2) = g.at(2, 0) = 1;
    g.at(1, 1) = 2;
    QuadLieAlgebra bad({"e", "h", "f"}, c, g);
    auto rep = bad.verify();
    CHECK_FALSE(rep.ok());
    bool jacobi_witness = false;
    for (const auto& f : rep.failures)
        if (f.find("Jacobi") != std::string::npos) jacobi_witness = true;
    CHECK(jacobi_witness);

    // antisymmetry violation is caught separately
    c[0][2][0] = 1;
    c[2][0][0] = 1;
    QuadLieAlgebra bad2({"e", "h", "f"}, c, g);
    bool antisym_witness = false;
    for (const auto& f : bad2.verify().failures)
        if (f.find("antisymmetric") != std::string::npos) antisym_witness = true;
    CHECK(antisym_witness);
}

TEST_CASE("non-invariant metric is rejected") {
    auto d = sl2();
    auto g = qm(3);
    g.at(0, 0) = g.at(1, 1) = g.at(2, 2) = 1; // definite, not invariant for sl2
    QuadLieAlgebra bad(d.labels(),
                       {{{Rational(0), Rational(0), Rational(0)},
                         {Rational(-2), Rational(0), Rational(0)},
                         {Rational(0), Rational(1), Rational(0)}},
                        {{Rational(2), Rational(0), Rational(0)},
                         {Rational(0), Rational(0), Rational(0)},
                         {Rational(0), Rational(0), Rational(-2)}},
                        {{Rational(0), Rational(-1), Rational(0)},
                         {Rational(0), Rational(0), Rational(2)},
                         {Rational(0), Rational(0), Rational(0)}}},
                       g);
    auto rep = bad.verify();
    bool invariance_witness = false;
    for (const auto& f : rep.failures)
        if (f.find("ad-invariant") != std::string::npos) invariance_witness = true;
    CHECK(invariance_witness);
}

TEST_CASE("aff(1) double is a Manin triple") {
    auto d = aff1_double();
    CHECK(d.verify().ok());

    SubalgebraSpec g{"g", span_rows({{Rational(1), Rational(0), Rational(0), Rational(0)},
                                     {Rational(0), Rational(1), Rational(0), Rational(0)}},
                                    4)};
    SubalgebraSpec gstar{"g*", span_rows({{Rational(0), Rational(0), Rational(1), Rational(0)},
                                          {Rational(0), Rational(0), Rational(0), Rational(1)}},
                                         4)};
    CHECK(check_subalgebra(d, g).ok());
    CHECK(check_subalgebra(d, gstar).ok());
    CHECK(check_matched_pair(d, g, gstar).ok());
    CHECK(d.form().is_lagrangian(g.space));
    CHECK(d.form().is_lagrangian(gstar.space));

    // a non-subalgebra is detected: span{a, b*} has [a,b*] = -b* outside
    SubalgebraSpec bad{"bad", span_rows({{Rational(1), Rational(0), Rational(0), Rational(0)},
                                         {Rational(0), Rational(0), Rational(1), Rational(1)}},
                                        4)};
    CHECK_FALSE(check_subalgebra(d, bad).ok());
}

TEST_CASE("double algebra: structure and metric") {
    auto d = sl2();
    auto t = double_algebra(d);
    CHECK(t.dim() == 6);
    CHECK(t.verify().ok());
    // both copies: (e,0) bracket (0,f) = (0, h)
    std::vector<Rational> eT(6, 0), fC(6, 0);
    eT[0] = 1;
    fC[5] = 1;
    auto br = t.bracket(eT, fC);
    std::vector<Rational> expect(6, 0);
    expect[4] = 1; // (0,h)
    CHECK(br == expect);
    // C-copy is abelian and isotropic
    std::vector<Rational> eC(6, 0), hC(6, 0);
    eC[3] = 1;
    hC[4] = 1;
    CHECK(t.bracket(eC, hC) == std::vector<Rational>(6, Rational(0)));
    CHECK(t.pairing(eC, hC) == Rational(0));
    // duality pairing between the copies
    CHECK(t.pairing(eT, fC) == Rational(1));
}

TEST_CASE("direct sum with conjugate: metric signs, diagonal Lagrangian") {
    auto d = sl2();
    auto dd = direct_sum_conjugate(d);
    CHECK(dd.dim() == 6);
    CHECK(dd.verify().ok());
    // diagonal is a Lagrangian subalgebra
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<Rational> r(6, 0);
        r[i] = 1;
        r[3 + i] = 1;
        rows.push_back(r);
    }
    SubalgebraSpec diag{"diag", span_rows(rows, 6)};
    CHECK(check_subalgebra(dd, diag).ok());
    CHECK(dd.form().is_lagrangian(diag.space));
}

TEST_CASE("metric inverse") {
    auto d = sl2();
    auto inv = d.metric_inverse();
    auto prod = d.metric() * inv;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(prod.at(i, j) == (i == j ? Rational(1) : Rational(0)));
}
