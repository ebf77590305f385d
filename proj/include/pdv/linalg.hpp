#pragma once

/**
 * @file linalg.hpp
 * @brief Exact linear algebra over an arbitrary field.
 *
 * Everything here is templated over the scalar field F, instantiated in
 * practice with exact rationals (fibrewise computations at sample points) and
 * with rational functions (fibrewise computations done once, symbolically).
 *
 * Subspaces are stored in reduced row echelon form, which is unique, so
 * subspace equality is plain data equality.  Pivot selection prefers entries
 * of low `pivot_weight` (total degree for rational functions) to keep
 * intermediate expressions small; the final RREF does not depend on the
 * choice.
 */

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pdv {

/// Default pivot weight: no preference.
template <class F>
unsigned long pivot_weight(const F&) {
    return 0;
}

/// A dense matrix over a field.  The additive and multiplicative identities
/// are carried explicitly because field elements may need context (a chart)
/// to construct.
template <class F>
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, F zero, F one)
        : zero_(std::move(zero)), one_(std::move(one)), cols_(cols),
          data_(rows, std::vector<F>(cols, zero_)) {}

    Matrix(std::vector<std::vector<F>> rows, F zero, F one)
        : zero_(std::move(zero)), one_(std::move(one)),
          cols_(rows.empty() ? 0 : rows.front().size()), data_(std::move(rows)) {
        for (const auto& r : data_)
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix rows");
    }

    std::size_t rows() const { return data_.size(); }
    std::size_t cols() const { return cols_; }
    const F& zero() const { return zero_; }
    const F& one() const { return one_; }
    const F& at(std::size_t i, std::size_t j) const { return data_.at(i).at(j); }
    F& at(std::size_t i, std::size_t j) { return data_.at(i).at(j); }
    const std::vector<F>& row(std::size_t i) const { return data_.at(i); }
    const std::vector<std::vector<F>>& data() const { return data_; }

    void append_row(std::vector<F> r) {
        if (data_.empty() && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("row width mismatch");
        data_.push_back(std::move(r));
    }

    Matrix transposed() const {
        Matrix t(cols_, rows(), zero_, one_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows()) throw std::invalid_argument("matrix product shape mismatch");
        Matrix r(rows(), o.cols(), zero_, one_);
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k) == zero_) continue;
                for (std::size_t j = 0; j < o.cols(); ++j)
                    r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
            }
        return r;
    }

    bool is_zero() const {
        for (const auto& r : data_)
            for (const auto& x : r)
                if (!(x == zero_)) return false;
        return true;
    }

    /// In-place reduced row echelon form.  Returns the pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t lead = 0;
        for (std::size_t col = 0; col < cols_ && lead < rows(); ++col) {
            // choose the simplest nonzero pivot candidate
            std::optional<std::size_t> best;
            for (std::size_t r = lead; r < rows(); ++r) {
                if (data_[r][col] == zero_) continue;
                if (!best || pivot_weight(data_[r][col]) < pivot_weight(data_[*best][col]))
                    best = r;
            }
            if (!best) continue;
            std::swap(data_[lead], data_[*best]);
            const F inv = one_ / data_[lead][col];
            for (std::size_t j = 0; j < cols_; ++j) data_[lead][j] = data_[lead][j] * inv;
            for (std::size_t r = 0; r < rows(); ++r) {
                if (r == lead || data_[r][col] == zero_) continue;
                const F factor = data_[r][col];
                for (std::size_t j = 0; j < cols_; ++j)
                    data_[r][j] = data_[r][j] - factor * data_[lead][j];
            }
            pivots.push_back(col);
            ++lead;
        }
        // drop zero rows
        std::vector<std::vector<F>> kept;
        for (auto& r : data_) {
            bool nonzero = false;
            for (const auto& x : r)
                if (!(x == zero_)) nonzero = true;
            if (nonzero) kept.push_back(std::move(r));
        }
        data_ = std::move(kept);
        return pivots;
    }

    std::size_t rank() const {
        Matrix m = *this;
        return m.rref().size();
    }

    /// Basis of the null space {x : M x = 0}, one solution per row.
    Matrix kernel() const {
        Matrix m = *this;
        const std::vector<std::size_t> pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t p : pivots) is_pivot[p] = true;
        Matrix result(0, cols_, zero_, one_);
        for (std::size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<F> x(cols_, zero_);
            x[free] = one_;
            for (std::size_t r = 0; r < pivots.size(); ++r)
                x[pivots[r]] = zero_ - m.at(r, free);
            result.append_row(std::move(x));
        }
        return result;
    }

    /// Solve M x = b.  Returns the particular solution with all free variables
    /// zero, or nullopt when inconsistent.
    std::optional<std::vector<F>> solve(const std::vector<F>& b) const {
        if (b.size() != rows()) throw std::invalid_argument("rhs length mismatch");
        Matrix aug(rows(), cols_ + 1, zero_, one_);
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        const std::vector<std::size_t> pivots = aug.rref();
        for (std::size_t p : pivots)
            if (p == cols_) return std::nullopt; // pivot in the rhs column
        std::vector<F> x(cols_, zero_);
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, cols_);
        return x;
    }

    bool operator==(const Matrix& o) const { return cols_ == o.cols_ && data_ == o.data_; }

private:
    F zero_, one_;
    std::size_t cols_;
    std::vector<std::vector<F>> data_;
};

/// Kernel basis put into canonical (RREF) form.
template <class F>
Matrix<F> kernel_canonical(const Matrix<F>& m) {
    Matrix<F> k = m.kernel();
    k.rref();
    return k;
}

/// A linear subspace of F^n in canonical (RREF) form.
template <class F>
class Subspace {
public:
    /// Span of the rows of `generators`.
    static Subspace span(Matrix<F> generators) {
        generators.rref();
        return Subspace(std::move(generators));
    }

    static Subspace zero(std::size_t ambient, const F& zero, const F& one) {
        return Subspace(Matrix<F>(0, ambient, zero, one));
    }

    static Subspace full(std::size_t ambient, const F& zero, const F& one) {
        Matrix<F> m(ambient, ambient, zero, one);
        for (std::size_t i = 0; i < ambient; ++i) m.at(i, i) = one;
        return Subspace(std::move(m));
    }

    const Matrix<F>& basis() const { return basis_; }
    std::size_t ambient_dim() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }

    bool contains(const std::vector<F>& v) const {
        Matrix<F> sys = basis_.transposed();
        return sys.solve(v).has_value();
    }

    bool contains(const Subspace& other) const {
        for (std::size_t i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_.row(i))) return false;
        return true;
    }

    /// Coordinates of v in the canonical basis; nullopt if v is outside.
    std::optional<std::vector<F>> coordinates(const std::vector<F>& v) const {
        return basis_.transposed().solve(v);
    }

    Subspace operator+(const Subspace& o) const {
        Matrix<F> m = basis_;
        for (std::size_t i = 0; i < o.dim(); ++i) m.append_row(o.basis_.row(i));
        if (dim() == 0 && o.dim() == 0)
            return zero(ambient_dim(), basis_.zero(), basis_.one());
        return span(std::move(m));
    }

    /// Annihilator {mu : mu(v) = 0 for all v in this} as a subspace of (F^n)*.
    Subspace annihilator() const { return Subspace(kernel_canonical(basis_)); }

    Subspace intersect(const Subspace& o) const {
        // (U cap V) = ann(ann U + ann V)
        return (annihilator() + o.annihilator()).annihilator();
    }

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

private:
    explicit Subspace(Matrix<F> rref_basis) : basis_(std::move(rref_basis)) {}
    Matrix<F> basis_;
};

/// A symmetric bilinear form on F^n, given by its Gram matrix.
template <class F>
class BilForm {
public:
    explicit BilForm(Matrix<F> gram) : gram_(std::move(gram)) {
        if (gram_.rows() != gram_.cols()) throw std::invalid_argument("gram must be square");
        for (std::size_t i = 0; i < gram_.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (!(gram_.at(i, j) == gram_.at(j, i)))
                    throw std::invalid_argument("gram must be symmetric");
    }

    const Matrix<F>& gram() const { return gram_; }
    std::size_t dim() const { return gram_.rows(); }
    bool is_nondegenerate() const { return gram_.rank() == dim(); }

    F pairing(const std::vector<F>& u, const std::vector<F>& v) const {
        if (u.size() != dim() || v.size() != dim())
            throw std::invalid_argument("pairing arity mismatch");
        F acc = gram_.zero();
        for (std::size_t i = 0; i < dim(); ++i) {
            if (u[i] == gram_.zero()) continue;
            for (std::size_t j = 0; j < dim(); ++j) acc = acc + u[i] * gram_.at(i, j) * v[j];
        }
        return acc;
    }

    /// Orthogonal complement of a subspace with respect to this form.
    Subspace<F> orth_complement(const Subspace<F>& s) const {
        if (s.ambient_dim() != dim()) throw std::invalid_argument("ambient mismatch");
        return Subspace<F>::span(kernel_canonical(s.basis() * gram_));
    }

    bool is_isotropic(const Subspace<F>& s) const {
        return (s.basis() * gram_ * s.basis().transposed()).is_zero();
    }
    bool is_coisotropic(const Subspace<F>& s) const { return s.contains(orth_complement(s)); }
    bool is_lagrangian(const Subspace<F>& s) const { return orth_complement(s) == s; }

private:
    Matrix<F> gram_;
};

/// Dimension bookkeeping for a relation composition; the composition of
/// bundle-like families is clean when these numbers are constant fibrewise.
struct ComposeReport {
    std::size_t dim_left = 0;     ///< dim of the left relation
    std::size_t dim_right = 0;    ///< dim of the right relation
    std::size_t dim_matched = 0;  ///< dim of matched pairs (intersection with the diagonal)
    std::size_t dim_result = 0;   ///< dim of the composed relation
    /// Pairs whose output vanishes: the "excess" of the intersection.
    std::size_t excess() const { return dim_matched - dim_result; }
};

/// A linear relation V_src --> V_dst: a subspace of V_dst (+) V_src, target
/// coordinates first.
template <class F>
class LinearRelation {
public:
    LinearRelation(std::size_t dst_dim, std::size_t src_dim, Subspace<F> graph)
        : dst_dim_(dst_dim), src_dim_(src_dim), graph_(std::move(graph)) {
        if (graph_.ambient_dim() != dst_dim_ + src_dim_)
            throw std::invalid_argument("relation ambient mismatch");
    }

    /// The graph relation of a linear map given by `rows` (image of the j-th
    /// source basis vector in row j).
    static LinearRelation graph_of(const Matrix<F>& map, std::size_t dst_dim) {
        const std::size_t src_dim = map.rows();
        if (map.cols() != dst_dim) throw std::invalid_argument("map shape mismatch");
        Matrix<F> gen(src_dim, dst_dim + src_dim, map.zero(), map.one());
        for (std::size_t j = 0; j < src_dim; ++j) {
            for (std::size_t k = 0; k < dst_dim; ++k) gen.at(j, k) = map.at(j, k);
            gen.at(j, dst_dim + j) = map.one();
        }
        return LinearRelation(dst_dim, src_dim, Subspace<F>::span(std::move(gen)));
    }

    static LinearRelation identity(std::size_t dim, const F& zero, const F& one) {
        Matrix<F> id(dim, dim, zero, one);
        for (std::size_t i = 0; i < dim; ++i) id.at(i, i) = one;
        return graph_of(id, dim);
    }

    std::size_t dst_dim() const { return dst_dim_; }
    std::size_t src_dim() const { return src_dim_; }
    const Subspace<F>& graph() const { return graph_; }
    std::size_t dim() const { return graph_.dim(); }

    /// Transpose relation V_dst --> V_src.
    LinearRelation transposed() const {
        const auto& b = graph_.basis();
        Matrix<F> gen(b.rows(), b.cols(), b.zero(), b.one());
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (std::size_t k = 0; k < src_dim_; ++k) gen.at(i, k) = b.at(i, dst_dim_ + k);
            for (std::size_t k = 0; k < dst_dim_; ++k) gen.at(i, src_dim_ + k) = b.at(i, k);
        }
        return LinearRelation(src_dim_, dst_dim_, Subspace<F>::span(std::move(gen)));
    }

    bool operator==(const LinearRelation& o) const {
        return dst_dim_ == o.dst_dim_ && src_dim_ == o.src_dim_ && graph_ == o.graph_;
    }

private:
    std::size_t dst_dim_, src_dim_;
    Subspace<F> graph_;
};

/// Composition of linear relations: (left o right)(x) = left(right(x)),
/// with `right: V1 --> V2` and `left: V2 --> V3`.  Also reports dimension
/// bookkeeping for cleanness checks.
template <class F>
LinearRelation<F> compose(const LinearRelation<F>& left, const LinearRelation<F>& right,
                          ComposeReport* report = nullptr) {
    if (left.src_dim() != right.dst_dim())
        throw std::invalid_argument("relation composition: middle dimension mismatch");
    const std::size_t mid = left.src_dim();
    const std::size_t p = left.dim(), q = right.dim();
    const auto& lb = left.graph().basis();
    const auto& rb = right.graph().basis();
    const F zero = lb.zero(), one = lb.one();

    // Match the middle components: rows are middle coordinates, columns are
    // the coefficients (lambda over left generators, mu over right generators).
    Matrix<F> match(mid, p + q, zero, one);
    for (std::size_t k = 0; k < mid; ++k) {
        for (std::size_t i = 0; i < p; ++i) match.at(k, i) = lb.at(i, left.dst_dim() + k);
        for (std::size_t j = 0; j < q; ++j) match.at(k, p + j) = zero - rb.at(j, k);
    }
    const Matrix<F> pairs = match.kernel();

    Matrix<F> gen(pairs.rows(), left.dst_dim() + right.src_dim(), zero, one);
    for (std::size_t r = 0; r < pairs.rows(); ++r) {
        for (std::size_t k = 0; k < left.dst_dim(); ++k) {
            F acc = zero;
            for (std::size_t i = 0; i < p; ++i) acc = acc + pairs.at(r, i) * lb.at(i, k);
            gen.at(r, k) = acc;
        }
        for (std::size_t k = 0; k < right.src_dim(); ++k) {
            F acc = zero;
            for (std::size_t j = 0; j < q; ++j)
                acc = acc + pairs.at(r, p + j) * rb.at(j, right.dst_dim() + k);
            gen.at(r, left.dst_dim() + k) = acc;
        }
    }
    LinearRelation<F> result(left.dst_dim(), right.src_dim(),
                             Subspace<F>::span(std::move(gen)));
    if (report) {
        report->dim_left = p;
        report->dim_right = q;
        report->dim_matched = pairs.rows();
        report->dim_result = result.dim();
    }
    return result;
}

/// The "twisted annihilator" of a relation: annihilate the graph, then flip
/// the sign of the source block.  It is the induced relation on dual spaces
/// and is contravariant-friendly: ann_natural(L o R) = ann_natural(L) o
/// ann_natural(R) whenever the composition is clean (covered by tests).
template <class F>
LinearRelation<F> ann_natural(const LinearRelation<F>& r) {
    const Subspace<F> ann = r.graph().annihilator();
    const auto& b = ann.basis();
    Matrix<F> gen = b;
    for (std::size_t i = 0; i < gen.rows(); ++i)
        for (std::size_t k = 0; k < r.src_dim(); ++k)
            gen.at(i, r.dst_dim() + k) = b.zero() - gen.at(i, r.dst_dim() + k);
    return LinearRelation<F>(r.dst_dim(), r.src_dim(), Subspace<F>::span(std::move(gen)));
}

} // namespace pdv
