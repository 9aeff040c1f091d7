#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "afllab/field.hpp"
#include "afllab/matrix.hpp"

namespace afl {

// Full O_E-lattice in E^n, O = O_{E,(p)}, held by its canonical basis:
// upper triangular columns, pivot (i,i) = p^{a_i}, entries above each pivot
// reduced to the canonical representative mod p^{a_i} O (both coordinates of
// a + b sqrt(u) reduced as fractions with p-power denominators). Two lattices
// are equal iff their canonical bases are identical.
class Lattice {
public:
    // Columns of `generators` span the lattice; more columns than n allowed.
    static Lattice from_generators(const ArithContext& ctx, const EMatrix& generators);
    static Lattice standard(const ArithContext& ctx, std::size_t n);

    const ArithContext& ctx() const { return ctx_; }
    std::size_t rank() const { return basis_.rows(); }
    const EMatrix& basis() const { return basis_; }
    const std::vector<long long>& pivot_vals() const { return pivot_vals_; }
    long long det_val() const;

    bool contains(const EMatrix& column_vector) const;
    bool contains(const Lattice& other) const;

    bool operator==(const Lattice& o) const { return basis_ == o.basis_; }
    bool operator!=(const Lattice& o) const { return !(*this == o); }

    // p^k L
    Lattice scaled(long long k) const;

private:
    Lattice(ArithContext ctx, EMatrix basis, std::vector<long long> pivot_vals)
        : ctx_(ctx), basis_(std::move(basis)), pivot_vals_(std::move(pivot_vals)) {}

    ArithContext ctx_;
    EMatrix basis_;
    std::vector<long long> pivot_vals_;
};

// Valuations (a_1 <= ... <= a_n) of the elementary divisors of a square
// nonsingular matrix over E, Smith reduction over the valuation ring.
std::vector<long long> elementary_divisors(const ArithContext& ctx, const EMatrix& m);

// Dual of L under the hermitian form (v, w) = w^{c,T} G v: basis (B^cT G)^{-1}.
Lattice hermitian_dual(const Lattice& lattice, const EMatrix& gram);

// Duals under the standard sesquilinear pairing (x1, x2) -> x2^c . x1 between
// the column space Mat_{n,1} and the row space Mat_{1,n}. Row lattices are
// passed/returned as the matrix whose rows span them.
Lattice sesqui_dual_of_rows(const ArithContext& ctx, const EMatrix& row_basis);
EMatrix sesqui_dual_of_columns(const Lattice& lattice);

// Semilinear map v -> mat . conj(v).
struct SemilinearMap {
    EMatrix mat;
};

// The finite quotient L'/L of two nested lattices, with its cyclic
// decomposition, optional induced operator/involution, and element-level
// arithmetic on coefficient tuples. A quotient element is encoded as a dense
// index into the mixed-radix tuple space.
class FiniteModule {
public:
    const ArithContext& ctx() const { return ctx_; }
    const Lattice& sub() const { return sub_; }
    const Lattice& sup() const { return sup_; }

    // Nonzero cyclic decomposition exponents, ascending: L'/L = + O/p^{a_j}.
    const std::vector<long long>& divisors() const { return divisors_; }
    long long length() const;
    // Cardinality q^{2 sum a_j} (exact).
    const Int& size() const { return size_; }

    bool has_operator() const { return !op_images_.empty() || divisors_.empty(); }
    bool has_involution() const { return !inv_images_.empty() || divisors_.empty(); }

    // Torsion pairing of two quotient elements into E/O, provided a Gram
    // matrix for the ambient hermitian form: value reduced mod O with p-power
    // denominators.
    FieldElement torsion_pairing(std::uint32_t i, std::uint32_t j,
                                 const EMatrix& gram) const;

    // Element helpers (index <-> ambient lift).
    std::uint64_t element_count() const; // raises complexity_exceeded past cap
    EMatrix lift(std::uint32_t index) const;
    std::uint32_t index_of(const EMatrix& vector_in_sup) const;
    std::uint32_t apply_operator(std::uint32_t index) const;
    std::uint32_t apply_involution(std::uint32_t index) const;
    std::uint32_t add(std::uint32_t i, std::uint32_t j) const;

    friend FiniteModule quotient_module(const Lattice& sub, const Lattice& sup,
                                        const EMatrix* op, const SemilinearMap* invol);
    friend class SubmoduleEnumerator;

private:
    FiniteModule(ArithContext ctx, Lattice sub, Lattice sup)
        : ctx_(ctx), sub_(std::move(sub)), sup_(std::move(sup)) {}

    ArithContext ctx_;
    Lattice sub_;
    Lattice sup_;
    std::vector<long long> divisors_;      // active (nonzero) exponents
    std::vector<unsigned long> moduli_;    // p^{a_j} per active component
    Int size_;
    EMatrix adapted_;                      // columns: adapted basis W of L'
    EMatrix adapted_inv_;
    std::vector<std::size_t> active_cols_; // columns of W with a_j > 0
    std::vector<std::uint32_t> op_images_;  // op(W_j) as element index
    std::vector<std::uint32_t> inv_images_; // invol(W_j) as element index

    std::vector<std::pair<unsigned long, unsigned long>> decode(std::uint32_t idx) const;
    std::uint32_t encode(const std::vector<std::pair<unsigned long, unsigned long>>& t) const;
    std::uint32_t scalar_mul(unsigned long s, unsigned long t, std::uint32_t idx) const;
};

// Builds L'/L. `op` (if given) must stabilize both lattices and have unit
// determinant; `invol` must be a semilinear involution stabilizing both.
FiniteModule quotient_module(const Lattice& sub, const Lattice& sup,
                             const EMatrix* op = nullptr,
                             const SemilinearMap* invol = nullptr);

struct EnumLimits {
    std::uint64_t max_module_size = 1000000;
    std::uint64_t max_submodules = 100000;
};

struct SubmoduleInfo {
    Lattice lift;                       // lattice between L and L'
    long long length = 0;               // O_E-length of the submodule
    std::vector<std::uint32_t> generators;
};

// All O-submodules of the quotient satisfying the requested stability
// constraints, with canonical deterministic ordering. Self-duality is decided
// by comparing the lift's canonical basis with its hermitian dual (requires
// `gram`). When every divisor exponent is 1 the quotient is a vector space
// over F_{q^2} and an echelon-form subspace walk is used instead of the
// generic element-set walk.
std::vector<SubmoduleInfo> enumerate_stable_submodules(
    const FiniteModule& q, bool require_op, bool require_invol,
    bool require_selfdual, const EMatrix* gram = nullptr,
    const EnumLimits& limits = {});

} // namespace afl
