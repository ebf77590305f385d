#pragma once

/**
 * @file quadlie.hpp
 * @brief Quadratic Lie algebras over Q: structure constants plus an invariant
 * metric, with exact verification, doubles, and subalgebra predicates.
 */

#include "linalg.hpp"
#include "rational.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace pdv {

/// Outcome of a structural verification: empty failure list means success.
struct CheckReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    void fail(std::string msg) { failures.push_back(std::move(msg)); }
};

/// A Lie algebra with a chosen basis, structure constants c[i][j][k]
/// ([xi_i, xi_j] = sum_k c[i][j][k] xi_k) and a symmetric invariant metric.
class QuadLieAlgebra {
public:
    QuadLieAlgebra(std::vector<std::string> labels,
                   std::vector<std::vector<std::vector<Rational>>> c,
                   Matrix<Rational> metric)
        : labels_(std::move(labels)), c_(std::move(c)), metric_(std::move(metric)) {
        const std::size_t n = labels_.size();
        if (c_.size() != n || metric_.rows() != n || metric_.cols() != n)
            throw std::invalid_argument("quadratic Lie algebra shape mismatch");
        for (const auto& ci : c_) {
            if (ci.size() != n) throw std::invalid_argument("structure constant shape mismatch");
            for (const auto& cij : ci)
                if (cij.size() != n)
                    throw std::invalid_argument("structure constant shape mismatch");
        }
    }

    std::size_t dim() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Rational& c(std::size_t i, std::size_t j, std::size_t k) const {
        return c_[i][j][k];
    }
    const Matrix<Rational>& metric() const { return metric_; }
    BilForm<Rational> form() const { return BilForm<Rational>(metric_); }

    /// Bracket of coefficient vectors over any commutative ring R that
    /// multiplies with Rational.
    template <class R>
    std::vector<R> bracket(const std::vector<R>& u, const std::vector<R>& v,
                           const R& zero) const {
        const std::size_t n = dim();
        if (u.size() != n || v.size() != n)
            throw std::invalid_argument("bracket arity mismatch");
        std::vector<R> out(n, zero);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (c_[i][j][k] == 0) continue;
                    out[k] = out[k] + c_[i][j][k] * (u[i] * v[j]);
                }
            }
        return out;
    }

    std::vector<Rational> bracket(const std::vector<Rational>& u,
                                  const std::vector<Rational>& v) const {
        return bracket<Rational>(u, v, Rational(0));
    }

    Rational pairing(const std::vector<Rational>& u, const std::vector<Rational>& v) const {
        return form().pairing(u, v);
    }

    /// Inverse metric (throws if degenerate); used for index raising.
    Matrix<Rational> metric_inverse() const {
        const std::size_t n = dim();
        Matrix<Rational> aug(n, 2 * n, Rational(0), Rational(1));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = metric_.at(i, j);
            aug.at(i, n + i) = Rational(1);
        }
        if (aug.rref().size() != n) throw std::domain_error("degenerate metric");
        Matrix<Rational> inv(n, n, Rational(0), Rational(1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
        return inv;
    }

    /// Verify antisymmetry, the Jacobi identity, metric symmetry and
    /// nondegeneracy, and ad-invariance of the metric.  Failures carry basis
    /// witnesses.
    CheckReport verify() const {
        CheckReport rep;
        const std::size_t n = dim();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (c_[i][j][k] != -c_[j][i][k])
                        rep.fail("bracket not antisymmetric at (" + labels_[i] + "," +
                                 labels_[j] + ")");
        // Jacobi: [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]] = 0
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    std::vector<Rational> acc(n, Rational(0));
                    auto cyc = [&](std::size_t a, std::size_t b, std::size_t cidx) {
                        std::vector<Rational> inner(n, Rational(0));
                        for (std::size_t m = 0; m < n; ++m) inner[m] = c_[b][cidx][m];
                        std::vector<Rational> ea(n, Rational(0));
                        ea[a] = 1;
                        auto outer = bracket(ea, inner);
                        for (std::size_t m = 0; m < n; ++m) acc[m] += outer[m];
                    };
                    cyc(i, j, k);
                    cyc(j, k, i);
                    cyc(k, i, j);
                    for (std::size_t m = 0; m < n; ++m)
                        if (acc[m] != 0) {
                            rep.fail("Jacobi identity fails at (" + labels_[i] + "," +
                                     labels_[j] + "," + labels_[k] + ")");
                            break;
                        }
                }
        if (!form().is_nondegenerate()) rep.fail("metric is degenerate");
        // invariance: <[x_i,x_j],x_k> + <x_j,[x_i,x_k]> = 0
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    Rational s(0);
                    for (std::size_t m = 0; m < n; ++m)
                        s += c_[i][j][m] * metric_.at(m, k) + c_[i][k][m] * metric_.at(j, m);
                    if (s != 0)
                        rep.fail("metric not ad-invariant at (" + labels_[i] + "," +
                                 labels_[j] + "," + labels_[k] + ")");
                }
        return rep;
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<std::vector<Rational>>> c_;
    Matrix<Rational> metric_;
};

/// The double of a quadratic Lie algebra: the semidirect product d |x d
/// (elements (xi, xi') with xi' an "infinitesimal" copy), with bracket
/// [(a,a'),(b,b')] = ([a,b], [a,b'] + [a',b]) and pairing
/// <(a,a'),(b,b')> = <a,b'> + <a',b>.  This is the tangent prolongation of a
/// point backend.
inline QuadLieAlgebra double_algebra(const QuadLieAlgebra& d) {
    const std::size_t n = d.dim();
    std::vector<std::string> labels;
    for (const auto& l : d.labels()) labels.push_back(l + "_T");
    for (const auto& l : d.labels()) labels.push_back(l + "_C");
    std::vector<std::vector<std::vector<Rational>>> c(
        2 * n, std::vector<std::vector<Rational>>(2 * n, std::vector<Rational>(2 * n, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const Rational& v = d.c(i, j, k);
                if (v == 0) continue;
                c[i][j][k] = v;             // [(a,0),(b,0)] = ([a,b],0)
                c[i][n + j][n + k] = v;     // [(a,0),(0,b)] = (0,[a,b])
                c[n + i][j][n + k] = v;     // [(0,a),(b,0)] = (0,[a,b])
            }
    Matrix<Rational> g(2 * n, 2 * n, Rational(0), Rational(1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            g.at(i, n + j) = d.metric().at(i, j);
            g.at(n + i, j) = d.metric().at(i, j);
        }
    return QuadLieAlgebra(std::move(labels), std::move(c), std::move(g));
}

/// Direct sum d (+) d-bar: componentwise bracket, metric g (+) (-g).
inline QuadLieAlgebra direct_sum_conjugate(const QuadLieAlgebra& d) {
    const std::size_t n = d.dim();
    std::vector<std::string> labels;
    for (const auto& l : d.labels()) labels.push_back(l + "_L");
    for (const auto& l : d.labels()) labels.push_back(l + "_R");
    std::vector<std::vector<std::vector<Rational>>> c(
        2 * n, std::vector<std::vector<Rational>>(2 * n, std::vector<Rational>(2 * n, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const Rational& v = d.c(i, j, k);
                if (v == 0) continue;
                c[i][j][k] = v;
                c[n + i][n + j][n + k] = v;
            }
    Matrix<Rational> g(2 * n, 2 * n, Rational(0), Rational(1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            g.at(i, j) = d.metric().at(i, j);
            g.at(n + i, n + j) = -d.metric().at(i, j);
        }
    return QuadLieAlgebra(std::move(labels), std::move(c), std::move(g));
}

/// A subspace of a quadratic Lie algebra given by spanning rows.
struct SubalgebraSpec {
    std::string name;
    Subspace<Rational> space;
};

/// Check closure under the bracket; report includes isotropy classification.
inline CheckReport check_subalgebra(const QuadLieAlgebra& d, const SubalgebraSpec& s) {
    CheckReport rep;
    if (s.space.ambient_dim() != d.dim()) {
        rep.fail(s.name + ": ambient dimension mismatch");
        return rep;
    }
    for (std::size_t i = 0; i < s.space.dim(); ++i)
        for (std::size_t j = i + 1; j < s.space.dim(); ++j) {
            auto br = d.bracket(s.space.basis().row(i), s.space.basis().row(j));
            if (!s.space.contains(br)) {
                std::ostringstream os;
                os << s.name << ": not closed under bracket (basis rows " << i << "," << j
                   << ")";
                rep.fail(os.str());
            }
        }
    return rep;
}

/// Check that e and f are complementary subalgebras of d (a matched pair
/// presented inside its bicrossed sum).
inline CheckReport check_matched_pair(const QuadLieAlgebra& d, const SubalgebraSpec& e,
                                      const SubalgebraSpec& f) {
    CheckReport rep;
    auto re = check_subalgebra(d, e);
    auto rf = check_subalgebra(d, f);
    rep.failures.insert(rep.failures.end(), re.failures.begin(), re.failures.end());
    rep.failures.insert(rep.failures.end(), rf.failures.begin(), rf.failures.end());
    if (e.space.intersect(f.space).dim() != 0)
        rep.fail("matched pair: subalgebras intersect nontrivially");
    if ((e.space + f.space).dim() != d.dim())
        rep.fail("matched pair: subalgebras do not span");
    return rep;
}

// ---------------------------------------------------------------------------
// Stock examples used across tests and the scenario library.
// ---------------------------------------------------------------------------

/// sl2 with basis (e, h, f), [h,e] = 2e, [h,f] = -2f, [e,f] = h and the
/// invariant metric <e,f> = 1, <h,h> = 2.
inline QuadLieAlgebra sl2() {
    const std::size_t n = 3; // order: e, h, f
    std::vector<std::vector<std::vector<Rational>>> c(
        n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0)));
    c[1][0][0] = 2;  // [h,e] = 2e
    c[0][1][0] = -2;
    c[1][2][2] = -2; // [h,f] = -2f
    c[2][1][2] = 2;
    c[0][2][1] = 1;  // [e,f] = h
    c[2][0][1] = -1;
    Matrix<Rational> g(n, n, Rational(0), Rational(1));
    g.at(0, 2) = g.at(2, 0) = 1;
    g.at(1, 1) = 2;
    return QuadLieAlgebra({"e", "h", "f"}, std::move(c), std::move(g));
}

/// The double of the 2-dimensional nonabelian Lie algebra: basis
/// (a, b, a*, b*) with [a,b] = b, coadjoint action [a,b*] = -b*, [b,b*] = a*,
/// abelian dual side, and the duality metric.  A Manin triple.
inline QuadLieAlgebra aff1_double() {
    const std::size_t n = 4; // order: a, b, a*, b*
    std::vector<std::vector<std::vector<Rational>>> c(
        n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0)));
    auto set = [&](std::size_t i, std::size_t j, std::size_t k, int v) {
        c[i][j][k] = v;
        c[j][i][k] = -v;
    };
    set(0, 1, 1, 1);  // [a,b] = b
    set(0, 3, 3, -1); // [a,b*] = -b*
    set(1, 3, 2, 1);  // [b,b*] = a*
    Matrix<Rational> g(n, n, Rational(0), Rational(1));
    g.at(0, 2) = g.at(2, 0) = 1;
    g.at(1, 3) = g.at(3, 1) = 1;
    return QuadLieAlgebra({"a", "b", "a*", "b*"}, std::move(c), std::move(g));
}

} // namespace pdv
