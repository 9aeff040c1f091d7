#include "afllab/lattice.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "afllab/finitefield.hpp"

namespace afl {

namespace {

Rat rat_p_pow(unsigned long p, long long e) {
    Int pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? Rat(pe) : Rat(1, pe);
}

FieldElement fe_p_pow(const ArithContext& ctx, long long e) {
    return FieldElement(rat_p_pow(ctx.p(), e), Rat(0), ctx.u());
}

FieldElement reduce_entry_mod(const ArithContext& ctx, const FieldElement& x, long long k) {
    return FieldElement(reduce_mod_pk(x.a(), ctx.p(), k),
                        reduce_mod_pk(x.b(), ctx.p(), k), ctx.u());
}

} // namespace

Lattice Lattice::from_generators(const ArithContext& ctx, const EMatrix& gens) {
    const std::size_t n = gens.rows();
    if (gens.cols() < n)
        raise(ErrorCode::not_full_rank, "fewer generators than the ambient rank");
    // Working columns; triangularize bottom row up, pivoting on the column
    // whose entry in the working row has minimal valuation.
    std::vector<std::vector<FieldElement>> cols(gens.cols());
    for (std::size_t j = 0; j < gens.cols(); ++j) {
        cols[j].resize(n, FieldElement::zero(ctx.u()));
        for (std::size_t i = 0; i < n; ++i) cols[j][i] = gens.at(i, j);
    }
    std::vector<std::vector<FieldElement>> assigned(n);
    std::vector<long long> pivots(n, 0);
    std::size_t unassigned = cols.size();
    for (std::size_t rr = n; rr-- > 0;) {
        long long best = kValInf;
        std::size_t best_j = unassigned;
        for (std::size_t j = 0; j < unassigned; ++j) {
            const long long v = ee_val(ctx, cols[j][rr]);
            if (v < best) {
                best = v;
                best_j = j;
            }
        }
        if (best == kValInf)
            raise(ErrorCode::not_full_rank, "generators do not span a full lattice");
        std::swap(cols[best_j], cols[unassigned - 1]);
        auto& piv = cols[unassigned - 1];
        // Normalize so the pivot entry is exactly p^a.
        const FieldElement unit = piv[rr] / fe_p_pow(ctx, best);
        const FieldElement unit_inv = unit.inverse();
        for (auto& e : piv) e *= unit_inv;
        for (std::size_t j = 0; j + 1 < unassigned; ++j) {
            if (cols[j][rr].is_zero()) continue;
            const FieldElement f = cols[j][rr] / piv[rr];
            for (std::size_t i = 0; i <= rr; ++i) cols[j][i] -= f * piv[i];
            cols[j][rr] = FieldElement::zero(ctx.u()); // exact by construction
        }
        assigned[rr] = piv;
        pivots[rr] = best;
        --unassigned;
    }
    // Reduce above-pivot entries to canonical representatives.
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = j; i-- > 0;) {
            const FieldElement reduced = reduce_entry_mod(ctx, assigned[j][i], pivots[i]);
            const FieldElement f = (assigned[j][i] - reduced) / assigned[i][i];
            for (std::size_t r = 0; r <= i; ++r) assigned[j][r] -= f * assigned[i][r];
            assigned[j][i] = reduced;
        }
    }
    EMatrix basis(n, n, ctx.u());
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) basis.at(i, j) = assigned[j][i];
    return Lattice(ctx, std::move(basis), std::move(pivots));
}

Lattice Lattice::standard(const ArithContext& ctx, std::size_t n) {
    return Lattice(ctx, EMatrix::identity(n, ctx.u()), std::vector<long long>(n, 0));
}

long long Lattice::det_val() const {
    long long s = 0;
    for (long long a : pivot_vals_) s += a;
    return s;
}

bool Lattice::contains(const EMatrix& v) const {
    if (v.rows() != rank() || v.cols() != 1)
        raise(ErrorCode::invalid_argument, "membership expects a column vector");
    std::vector<FieldElement> w(rank());
    for (std::size_t i = 0; i < rank(); ++i) w[i] = v.at(i, 0);
    for (std::size_t r = rank(); r-- > 0;) {
        if (w[r].is_zero()) continue;
        const FieldElement coeff = w[r] / basis_.at(r, r);
        if (ee_val(ctx_, coeff) < 0) return false;
        for (std::size_t i = 0; i <= r; ++i) w[i] -= coeff * basis_.at(i, r);
    }
    return true;
}

bool Lattice::contains(const Lattice& other) const {
    for (std::size_t j = 0; j < other.rank(); ++j)
        if (!contains(other.basis().column(j))) return false;
    return true;
}

Lattice Lattice::scaled(long long k) const {
    Lattice out = *this;
    out.basis_ = basis_.scaled(fe_p_pow(ctx_, k));
    for (auto& a : out.pivot_vals_) a += k;
    return out;
}

std::vector<long long> elementary_divisors(const ArithContext& ctx, const EMatrix& m) {
    if (!m.is_square()) raise(ErrorCode::invalid_argument, "elementary divisors of non-square matrix");
    const std::size_t n = m.rows();
    EMatrix w = m;
    std::vector<long long> vals;
    for (std::size_t k = 0; k < n; ++k) {
        long long best = kValInf;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                const long long v = ee_val(ctx, w.at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best == kValInf)
            raise(ErrorCode::singular_matrix, "matrix is singular over E");
        for (std::size_t j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(bi, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(w.at(i, k), w.at(i, bj));
        const FieldElement piv = w.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (w.at(i, k).is_zero()) continue;
            const FieldElement f = w.at(i, k) / piv;
            for (std::size_t j = k; j < n; ++j) w.at(i, j) -= f * w.at(k, j);
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (w.at(k, j).is_zero()) continue;
            const FieldElement f = w.at(k, j) / piv;
            for (std::size_t i = k; i < n; ++i) w.at(i, j) -= f * w.at(i, k);
        }
        vals.push_back(best);
    }
    std::sort(vals.begin(), vals.end());
    return vals;
}

Lattice hermitian_dual(const Lattice& lattice, const EMatrix& gram) {
    const ArithContext& ctx = lattice.ctx();
    if (gram.det().is_zero())
        raise(ErrorCode::degenerate_pairing, "Gram matrix is singular");
    const EMatrix m = lattice.basis().conj_transpose() * gram;
    return Lattice::from_generators(ctx, m.inverse());
}

Lattice sesqui_dual_of_rows(const ArithContext& ctx, const EMatrix& row_basis) {
    if (!row_basis.is_square())
        raise(ErrorCode::degenerate_pairing, "row basis must be square and invertible");
    return Lattice::from_generators(ctx, row_basis.conj().inverse());
}

EMatrix sesqui_dual_of_columns(const Lattice& lattice) {
    // Rows spanning {x2 : x2^c . v integral for all v in L}.
    return lattice.basis().inverse().conj();
}

namespace {

// Smith decomposition over the valuation ring with left-transform tracking:
// X = U D V, U и V unimodular, D = diag(p^{a_i}). Only U is needed.
void smith_with_left_transform(const ArithContext& ctx, EMatrix& x, EMatrix& u,
                               std::vector<long long>& diag) {
    const std::size_t n = x.rows();
    u = EMatrix::identity(n, ctx.u());
    diag.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        long long best = kValInf;
        std::size_t bi = k, bj = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                const long long v = ee_val(ctx, x.at(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (best == kValInf)
            raise(ErrorCode::singular_matrix, "quotient transition matrix is singular");
        // Row swap on X -> column swap on U.
        for (std::size_t j = 0; j < n; ++j) std::swap(x.at(k, j), x.at(bi, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(u.at(i, k), u.at(i, bi));
        for (std::size_t i = 0; i < n; ++i) std::swap(x.at(i, k), x.at(i, bj));
        // Normalize the pivot row so the pivot is exactly p^best:
        // X <- E X with E = diag(..., unit^{-1}, ...), so U <- U diag(..., unit, ...).
        const FieldElement unit = x.at(k, k) / fe_p_pow(ctx, best);
        const FieldElement unit_inv = unit.inverse();
        for (std::size_t j = 0; j < n; ++j) x.at(k, j) *= unit_inv;
        for (std::size_t i = 0; i < n; ++i) u.at(i, k) *= unit;
        const FieldElement piv = x.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (x.at(i, k).is_zero()) continue;
            const FieldElement f = x.at(i, k) / piv;
            // Row_i -= f Row_k on X  ==>  Col_k += f Col_i on U.
            for (std::size_t j = 0; j < n; ++j) x.at(i, j) -= f * x.at(k, j);
            for (std::size_t i2 = 0; i2 < n; ++i2) u.at(i2, k) += f * u.at(i2, i);
        }
        for (std::size_t j = k + 1; j < n; ++j) {
            if (x.at(k, j).is_zero()) continue;
            const FieldElement f = x.at(k, j) / piv;
            for (std::size_t i = k; i < n; ++i) x.at(i, j) -= f * x.at(i, k);
        }
        diag[k] = best;
    }
}

unsigned long ul_p_pow(unsigned long p, long long e) {
    unsigned long r = 1;
    for (long long i = 0; i < e; ++i) r *= p;
    return r;
}

} // namespace

FiniteModule quotient_module(const Lattice& sub, const Lattice& sup,
                             const EMatrix* op, const SemilinearMap* invol) {
    const ArithContext& ctx = sub.ctx();
    if (!sup.contains(sub))
        raise(ErrorCode::not_contained, "quotient requires L contained in L'");
    FiniteModule q(ctx, sub, sup);

    EMatrix x = sup.basis().inverse() * sub.basis();
    EMatrix u;
    std::vector<long long> diag;
    smith_with_left_transform(ctx, x, u, diag);
    q.adapted_ = sup.basis() * u;
    q.adapted_inv_ = q.adapted_.inverse();

    // Ascending active components.
    std::vector<std::pair<long long, std::size_t>> order;
    for (std::size_t j = 0; j < diag.size(); ++j)
        if (diag[j] > 0) order.emplace_back(diag[j], j);
    std::sort(order.begin(), order.end());
    q.size_ = 1;
    for (const auto& [a, j] : order) {
        q.divisors_.push_back(a);
        q.active_cols_.push_back(j);
        const unsigned long m = ul_p_pow(ctx.p(), a);
        q.moduli_.push_back(m);
        q.size_ *= Int(m) * Int(m);
    }

    if (op) {
        if (!op->is_square() || op->rows() != sub.rank())
            raise(ErrorCode::invalid_argument, "operator shape mismatch");
        // Stability of both lattices; unit determinant so the induced map is
        // invertible on the quotient.
        for (std::size_t j = 0; j < sub.rank(); ++j) {
            if (!sub.contains(*op * sub.basis().column(j)))
                raise(ErrorCode::not_stable, "operator does not stabilize L");
            if (!sup.contains(*op * sup.basis().column(j)))
                raise(ErrorCode::not_stable, "operator does not stabilize L'");
        }
        if (ee_val(ctx, op->det()) != 0)
            raise(ErrorCode::not_stable, "operator determinant is not a unit");
        for (std::size_t idx = 0; idx < q.active_cols_.size(); ++idx) {
            const EMatrix img = *op * q.adapted_.column(q.active_cols_[idx]);
            q.op_images_.push_back(q.index_of(img));
        }
    }
    if (invol) {
        if (!invol->mat.is_square() || invol->mat.rows() != sub.rank())
            raise(ErrorCode::invalid_argument, "involution shape mismatch");
        for (std::size_t j = 0; j < sub.rank(); ++j) {
            if (!sub.contains(invol->mat * sub.basis().column(j).conj()))
                raise(ErrorCode::not_stable, "involution does not stabilize L");
            if (!sup.contains(invol->mat * sup.basis().column(j).conj()))
                raise(ErrorCode::not_stable, "involution does not stabilize L'");
        }
        for (std::size_t idx = 0; idx < q.active_cols_.size(); ++idx) {
            const EMatrix img =
                invol->mat * q.adapted_.column(q.active_cols_[idx]).conj();
            q.inv_images_.push_back(q.index_of(img));
        }
    }
    return q;
}

long long FiniteModule::length() const {
    long long s = 0;
    for (long long a : divisors_) s += a;
    return s;
}

std::uint64_t FiniteModule::element_count() const {
    if (!size_.fits_ulong_p())
        raise(ErrorCode::complexity_exceeded, "quotient module too large to enumerate");
    return size_.get_ui();
}

std::vector<std::pair<unsigned long, unsigned long>> FiniteModule::decode(
    std::uint32_t idx) const {
    std::vector<std::pair<unsigned long, unsigned long>> t(moduli_.size());
    std::uint64_t rest = idx;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        const std::uint64_t m = moduli_[j];
        const std::uint64_t digit = rest % (m * m);
        rest /= m * m;
        t[j] = {static_cast<unsigned long>(digit % m),
                static_cast<unsigned long>(digit / m)};
    }
    return t;
}

std::uint32_t FiniteModule::encode(
    const std::vector<std::pair<unsigned long, unsigned long>>& t) const {
    std::uint64_t idx = 0;
    for (std::size_t j = moduli_.size(); j-- > 0;) {
        const std::uint64_t m = moduli_[j];
        idx = idx * (m * m) + (t[j].first + m * t[j].second);
    }
    return static_cast<std::uint32_t>(idx);
}

EMatrix FiniteModule::lift(std::uint32_t index) const {
    const auto t = decode(index);
    EMatrix v(sub_.rank(), 1, ctx_.u());
    for (std::size_t j = 0; j < t.size(); ++j) {
        const FieldElement coeff(Rat(static_cast<long>(t[j].first)),
                                 Rat(static_cast<long>(t[j].second)), ctx_.u());
        if (coeff.is_zero()) continue;
        const EMatrix col = adapted_.column(active_cols_[j]);
        for (std::size_t i = 0; i < v.rows(); ++i) v.at(i, 0) += coeff * col.at(i, 0);
    }
    return v;
}

std::uint32_t FiniteModule::index_of(const EMatrix& vector_in_sup) const {
    const EMatrix coords = adapted_inv_ * vector_in_sup;
    std::vector<std::pair<unsigned long, unsigned long>> t(moduli_.size());
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        const FieldElement& c = coords.at(active_cols_[j], 0);
        if (ee_val(ctx_, c) < 0)
            raise(ErrorCode::invalid_argument, "vector not in L'");
        const long long a = divisors_[j];
        const Rat ra = reduce_mod_pk(c.a(), ctx_.p(), a);
        const Rat rb = reduce_mod_pk(c.b(), ctx_.p(), a);
        t[j] = {static_cast<unsigned long>(ra.get_num().get_ui()),
                static_cast<unsigned long>(rb.get_num().get_ui())};
    }
    return encode(t);
}

std::uint32_t FiniteModule::scalar_mul(unsigned long s, unsigned long t,
                                       std::uint32_t idx) const {
    std::uint64_t out = 0, mul = 1, rest = idx;
    const unsigned long uu = ctx_.u();
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        const std::uint64_t m = moduli_[j];
        const std::uint64_t m2 = m * m;
        const std::uint64_t digit = rest % m2;
        rest /= m2;
        const std::uint64_t a = digit % m, b = digit / m;
        // (s + t w)(a + b w) = sa + u t b + (s b + t a) w
        const std::uint64_t ra = (s % m * a + (uu % m) * (t % m) % m * b) % m;
        const std::uint64_t rb = (s % m * b + t % m * a) % m;
        out += (ra + m * rb) * mul;
        mul *= m2;
    }
    return static_cast<std::uint32_t>(out);
}

std::uint32_t FiniteModule::add(std::uint32_t i, std::uint32_t j) const {
    std::uint64_t out = 0, mul = 1, ri = i, rj = j;
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const std::uint64_t m = moduli_[k];
        const std::uint64_t m2 = m * m;
        const std::uint64_t di = ri % m2, dj = rj % m2;
        ri /= m2;
        rj /= m2;
        const std::uint64_t a = (di % m + dj % m) % m;
        const std::uint64_t b = (di / m + dj / m) % m;
        out += (a + m * b) * mul;
        mul *= m2;
    }
    return static_cast<std::uint32_t>(out);
}

std::uint32_t FiniteModule::apply_operator(std::uint32_t index) const {
    if (op_images_.empty() && !divisors_.empty())
        raise(ErrorCode::missing_structure, "quotient has no induced operator");
    std::uint32_t acc = 0;
    std::uint64_t rest = index;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        const std::uint64_t m = moduli_[j];
        const std::uint64_t digit = rest % (m * m);
        rest /= m * m;
        if (digit == 0) continue;
        acc = add(acc, scalar_mul(static_cast<unsigned long>(digit % m),
                                  static_cast<unsigned long>(digit / m), op_images_[j]));
    }
    return acc;
}

std::uint32_t FiniteModule::apply_involution(std::uint32_t index) const {
    if (inv_images_.empty() && !divisors_.empty())
        raise(ErrorCode::missing_structure, "quotient has no induced involution");
    std::uint32_t acc = 0;
    std::uint64_t rest = index;
    for (std::size_t j = 0; j < moduli_.size(); ++j) {
        const std::uint64_t m = moduli_[j];
        const std::uint64_t digit = rest % (m * m);
        rest /= m * m;
        if (digit == 0) continue;
        // Semilinear: coefficients conjugate before multiplying the image.
        acc = add(acc, scalar_mul(static_cast<unsigned long>(digit % m),
                                  static_cast<unsigned long>((m - digit / m) % m),
                                  inv_images_[j]));
    }
    return acc;
}

FieldElement FiniteModule::torsion_pairing(std::uint32_t i, std::uint32_t j,
                                           const EMatrix& gram) const {
    const EMatrix vi = lift(i), vj = lift(j);
    const EMatrix val = vj.conj_transpose() * gram * vi;
    return reduce_entry_mod(ctx_, val.at(0, 0), 0);
}

namespace {

// Fixed-size bit set over element indices.
struct Bits {
    std::vector<std::uint64_t> w;
    std::uint64_t count = 0;

    explicit Bits(std::uint64_t n) : w((n + 63) / 64, 0) {}
    bool test(std::uint32_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(std::uint32_t i) {
        std::uint64_t& word = w[i >> 6];
        const std::uint64_t bit = 1ULL << (i & 63);
        if (!(word & bit)) {
            word |= bit;
            ++count;
        }
    }
    std::vector<std::uint32_t> elements() const {
        std::vector<std::uint32_t> out;
        out.reserve(count);
        for (std::size_t k = 0; k < w.size(); ++k) {
            std::uint64_t word = w[k];
            while (word) {
                const int b = __builtin_ctzll(word);
                out.push_back(static_cast<std::uint32_t>(k * 64 + b));
                word &= word - 1;
            }
        }
        return out;
    }
    bool operator<(const Bits& o) const { return w < o.w; }
};

} // namespace

class SubmoduleEnumerator {
public:
    SubmoduleEnumerator(const FiniteModule& q, bool need_op, bool need_inv,
                        const EnumLimits& limits)
        : q_(q), need_op_(need_op), need_inv_(need_inv), limits_(limits) {}

    // Generic walk over the submodule poset: from each известный stable
    // submodule S, try one representative of every coset v + S with p v in S;
    // the closure of S and v under addition, O-scaling and the required maps
    // is the smallest stable submodule above S containing v. Every stable
    // submodule is reached through a chain of such extensions.
    std::vector<std::vector<std::uint32_t>> run() {
        const std::uint64_t size = q_.element_count();
        if (size > limits_.max_module_size)
            raise(ErrorCode::complexity_exceeded, "quotient module exceeds size cap");
        if (need_op_ && !q_.has_operator())
            raise(ErrorCode::missing_structure, "operator required but absent");
        if (need_inv_ && !q_.has_involution())
            raise(ErrorCode::missing_structure, "involution required but absent");
        const unsigned long p = q_.ctx().p();

        std::vector<std::uint32_t> pmul(size);
        for (std::uint64_t i = 0; i < size; ++i)
            pmul[i] = q_.scalar_mul(p, 0, static_cast<std::uint32_t>(i));

        Bits zero(size);
        zero.set(0);
        std::vector<Bits> found;
        std::vector<std::vector<std::uint32_t>> gens;
        std::set<std::vector<std::uint64_t>> seen;
        found.push_back(zero);
        gens.push_back({});
        seen.insert(zero.w);
        for (std::size_t head = 0; head < found.size(); ++head) {
            const Bits S = found[head]; // copy: found reallocates as it grows
            Bits visited = S;
            const auto s_elems = S.elements();
            for (std::uint64_t v = 1; v < size; ++v) {
                const std::uint32_t vi = static_cast<std::uint32_t>(v);
                if (S.test(vi) || visited.test(vi)) continue;
                if (!S.test(pmul[vi])) continue;
                for (const std::uint32_t e : s_elems) visited.set(q_.add(vi, e));
                Bits T = close(S, vi, size);
                if (seen.insert(T.w).second) {
                    auto g = gens[head];
                    g.push_back(vi);
                    found.push_back(std::move(T));
                    gens.push_back(std::move(g));
                    if (found.size() > limits_.max_submodules)
                        raise(ErrorCode::complexity_exceeded, "submodule count exceeds cap");
                }
            }
        }
        return gens;
    }

private:
    Bits close(const Bits& base, std::uint32_t seed, std::uint64_t size) const {
        Bits t = base;
        std::queue<std::uint32_t> work;
        work.push(seed);
        const unsigned long p = q_.ctx().p();
        while (!work.empty()) {
            const std::uint32_t g = work.front();
            work.pop();
            if (t.test(g)) continue;
            // additive order exponent of g
            long long k = 0;
            {
                std::uint32_t cur = g;
                while (cur != 0) {
                    cur = q_.scalar_mul(p, 0, cur);
                    ++k;
                }
            }
            unsigned long pk = 1;
            for (long long i = 0; i < k; ++i) pk *= p;
            std::vector<std::uint32_t> multiples;
            multiples.reserve(static_cast<std::size_t>(pk) * pk);
            for (unsigned long s = 0; s < pk; ++s)
                for (unsigned long tt = 0; tt < pk; ++tt)
                    multiples.push_back(q_.scalar_mul(s, tt, g));
            const auto snapshot = t.elements();
            for (const std::uint32_t e : snapshot)
                for (const std::uint32_t m : multiples) t.set(q_.add(e, m));
            if (need_op_) work.push(q_.apply_operator(g));
            if (need_inv_) work.push(q_.apply_involution(g));
        }
        (void)size;
        return t;
    }

    const FiniteModule& q_;
    bool need_op_;
    bool need_inv_;
    EnumLimits limits_;
};

namespace {

// Echelon-walk specialization for quotients that are F_{q^2}-vector spaces (all
// divisor exponents equal to 1). Vectors are coefficient tuples over F_{q^2}.
struct FqVecSpace {
    const FiniteModule& q;
    unsigned long p, u;
    std::size_t dim;

    std::vector<FqElement> decode(std::uint64_t idx) const {
        std::vector<FqElement> v(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            v[j] = FqElement{static_cast<unsigned long>(idx % p), 0, p, u};
            idx /= p;
            v[j].b = static_cast<unsigned long>(idx % p);
            idx /= p;
        }
        return v;
    }

    std::uint32_t encode(const std::vector<FqElement>& v) const {
        std::uint64_t idx = 0;
        for (std::size_t j = dim; j-- > 0;) idx = (idx * p + v[j].b) * p + v[j].a;
        return static_cast<std::uint32_t>(idx);
    }

    bool is_zero(const std::vector<FqElement>& v) const {
        for (const auto& c : v)
            if (!c.is_zero()) return false;
        return true;
    }

    // Reduce v against an echelon basis (rows with strictly increasing pivot
    // positions, pivot value 1, pivot column elsewhere zero).
    std::vector<FqElement> reduce(const std::vector<std::vector<FqElement>>& basis,
                                  std::vector<FqElement> v) const {
        for (const auto& row : basis) {
            std::size_t piv = 0;
            while (piv < dim && row[piv].is_zero()) ++piv;
            if (piv == dim || v[piv].is_zero()) continue;
            const FqElement f = v[piv];
            for (std::size_t j = 0; j < dim; ++j) v[j] = fq_sub(v[j], fq_mul(f, row[j]));
        }
        return v;
    }

    void insert(std::vector<std::vector<FqElement>>& basis,
                std::vector<FqElement> v) const {
        v = reduce(basis, v);
        if (is_zero(v)) return;
        std::size_t piv = 0;
        while (v[piv].is_zero()) ++piv;
        const FqElement inv = fq_inv(v[piv]);
        for (auto& c : v) c = fq_mul(c, inv);
        // clear the new pivot column in existing rows
        for (auto& row : basis) {
            if (row[piv].is_zero()) continue;
            const FqElement f = row[piv];
            for (std::size_t j = 0; j < dim; ++j)
                row[j] = fq_sub(row[j], fq_mul(f, v[j]));
        }
        basis.push_back(std::move(v));
        std::sort(basis.begin(), basis.end(),
                  [this](const auto& a, const auto& b) {
                      std::size_t pa = 0, pb = 0;
                      while (pa < dim && a[pa].is_zero()) ++pa;
                      while (pb < dim && b[pb].is_zero()) ++pb;
                      return pa < pb;
                  });
    }

    std::vector<FqElement> apply_linear(const std::vector<std::uint32_t>& images,
                                        const std::vector<FqElement>& v,
                                        bool conj_coeff) const {
        std::vector<FqElement> out(dim, FqElement{0, 0, p, u});
        for (std::size_t j = 0; j < dim; ++j) {
            if (v[j].is_zero()) continue;
            const FqElement c = conj_coeff ? fq_conj(v[j]) : v[j];
            const auto img = decode(images[j]);
            for (std::size_t k = 0; k < dim; ++k)
                out[k] = fq_add(out[k], fq_mul(c, img[k]));
        }
        return out;
    }
};

} // namespace

std::vector<SubmoduleInfo> enumerate_stable_submodules(
    const FiniteModule& q, bool require_op, bool require_invol,
    bool require_selfdual, const EMatrix* gram, const EnumLimits& limits) {
    if (require_selfdual && gram == nullptr)
        raise(ErrorCode::missing_structure, "self-duality requires a Gram matrix");

    const bool minuscule =
        std::all_of(q.divisors().begin(), q.divisors().end(),
                    [](long long a) { return a == 1; });

    std::vector<std::vector<std::uint32_t>> gen_sets;
    if (q.divisors().empty()) {
        gen_sets.push_back({});
    } else if (minuscule) {
        // Subspace walk over F_{q^2}.
        const std::uint64_t size = q.element_count();
        if (size > limits.max_module_size)
            raise(ErrorCode::complexity_exceeded, "quotient module exceeds size cap");
        if (require_op && !q.has_operator())
            raise(ErrorCode::missing_structure, "operator required but absent");
        if (require_invol && !q.has_involution())
            raise(ErrorCode::missing_structure, "involution required but absent");
        FqVecSpace vs{q, q.ctx().p(), q.ctx().u(), q.divisors().size()};
        std::vector<std::uint32_t> op_imgs, inv_imgs;
        for (std::size_t j = 0; j < vs.dim; ++j) {
            std::vector<FqElement> e(vs.dim, FqElement{0, 0, vs.p, vs.u});
            e[j] = FqElement{1, 0, vs.p, vs.u};
            const std::uint32_t ej = vs.encode(e);
            if (q.has_operator() && !q.divisors().empty())
                op_imgs.push_back(q.apply_operator(ej));
            if (q.has_involution() && !q.divisors().empty())
                inv_imgs.push_back(q.apply_involution(ej));
        }

        using Basis = std::vector<std::vector<FqElement>>;
        auto close = [&](Basis basis, std::vector<FqElement> seed) {
            std::queue<std::vector<FqElement>> work;
            work.push(std::move(seed));
            while (!work.empty()) {
                auto v = work.front();
                work.pop();
                if (vs.is_zero(vs.reduce(basis, v))) continue;
                vs.insert(basis, v);
                if (require_op) work.push(vs.apply_linear(op_imgs, v, false));
                if (require_invol) work.push(vs.apply_linear(inv_imgs, v, true));
            }
            return basis;
        };
        auto key_of = [&](const Basis& b) {
            std::vector<unsigned long> key;
            for (const auto& row : b)
                for (const auto& c : row) {
                    key.push_back(c.a);
                    key.push_back(c.b);
                }
            return key;
        };

        std::vector<Basis> found{{}};
        std::vector<std::vector<std::uint32_t>> gens{{}};
        std::set<std::vector<unsigned long>> seen{key_of({})};
        for (std::size_t head = 0; head < found.size(); ++head) {
            const Basis S = found[head];
            for (std::uint64_t idx = 1; idx < size; ++idx) {
                auto v = vs.decode(idx);
                // one candidate per line: first nonzero coordinate == 1
                std::size_t piv = 0;
                while (piv < vs.dim && v[piv].is_zero()) ++piv;
                if (v[piv] != FqElement{1, 0, vs.p, vs.u}) continue;
                if (vs.is_zero(vs.reduce(S, v))) continue;
                Basis T = close(S, v);
                if (seen.insert(key_of(T)).second) {
                    auto g = gens[head];
                    g.push_back(static_cast<std::uint32_t>(idx));
                    found.push_back(std::move(T));
                    gens.push_back(std::move(g));
                    if (found.size() > limits.max_submodules)
                        raise(ErrorCode::complexity_exceeded, "submodule count exceeds cap");
                }
            }
        }
        gen_sets = std::move(gens);
    } else {
        SubmoduleEnumerator walker(q, require_op, require_invol, limits);
        gen_sets = walker.run();
    }

    const ArithContext& ctx = q.ctx();
    std::vector<SubmoduleInfo> out;
    for (const auto& gens : gen_sets) {
        EMatrix cols = q.sub().basis();
        for (const std::uint32_t g : gens) cols = EMatrix::hcat(cols, q.lift(g));
        Lattice lam = Lattice::from_generators(ctx, cols);
        const long long len = q.sub().det_val() - lam.det_val();
        if (require_selfdual) {
            if (len * 2 != q.length()) continue;
            if (!(hermitian_dual(lam, *gram) == lam)) continue;
        }
        out.push_back(SubmoduleInfo{std::move(lam), len, gens});
    }
    std::sort(out.begin(), out.end(), [](const SubmoduleInfo& a, const SubmoduleInfo& b) {
        if (a.length != b.length) return a.length < b.length;
        return a.lift.basis().str() < b.lift.basis().str();
    });
    return out;
}

} // namespace afl
