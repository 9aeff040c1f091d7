#pragma once

#include <map>
#include <optional>
#include <vector>

#include "afllab/finitefield.hpp"
#include "afllab/orbits.hpp"

namespace afl {

// Orb(s) as a Laurent polynomial in Q = q^{-2s}: finitely many integer
// coefficients c_e at exponents e = val(det g).
class OrbLaurent {
public:
    OrbLaurent() = default;

    void add(long long exponent, long long coeff);
    const std::map<long long, long long>& coeffs() const { return coeffs_; }
    // Orb(0): evaluation at Q = 1.
    long long value_at_zero() const;
    // sum e * c_e; the s-derivative at 0 is -2 log(q) times this.
    long long exponent_weighted_sum() const;
    bool operator==(const OrbLaurent& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const OrbLaurent& o) const { return !(*this == o); }

private:
    std::map<long long, long long> coeffs_; // zero coefficients are dropped
};

struct Caps {
    std::uint64_t max_module_size = 1000000;
    std::uint64_t max_submodules = 100000;
    std::uint64_t max_cosets = 10000000;
};

// #N_i for i = 0..delta: lattices between L and L* stable under the operator
// and the involution tau, counted by length.
std::vector<long long> count_N(const UnitaryModel& model, const Caps& caps = {});

// #M_i for i = 0..delta: conjugation- and zeta-stable lattices containing L1
// with L2 inside the sesquilinear dual, counted by length over L1. All-zero
// when the orbit misses the integral support entirely.
std::vector<long long> count_M(const SymmetricPair& pair, const Caps& caps = {});

OrbLaurent orb_laurent(const std::vector<long long>& counts_m, long long v);

// Self-dual operator-stable lattices containing x; the unitary side of the
// even-valuation comparison. Requires delta even.
long long unitary_selfdual_count(const UnitaryModel& model, const Caps& caps = {});

// Characteristic polynomial of the induced operator on L*/L over F_{q^2}.
FqPolynomial residual_char_poly(const UnitaryModel& model, const Caps& caps = {});

// deg Q (m(Q)+1)/2 prod(1+m(R)) over the factorization of the residual
// characteristic polynomial; the proven value of the intersection side in the
// minuscule case.
long long minuscule_closed_value(const UnitaryModel& model, const Caps& caps = {});

// Brute-force orbital integral for n <= 2: walk triangular coset
// representatives of GL_n(F)/GL_n(O_F) and sum the indicator-weighted
// character. Independent of the lattice-counting path.
OrbLaurent direct_coset_orb(const SymmetricPair& pair, const Caps& caps = {});

struct Verdicts {
    std::optional<bool> duality;
    std::optional<bool> bijection;
    std::optional<bool> rfl1;
    std::optional<bool> rfl2;
    std::optional<bool> afl_minuscule;
    std::optional<bool> oracle;
};

struct OrbitalReport {
    bool from_pair = false;
    std::optional<InvariantRecord> invariants;
    long long delta = 0;
    std::vector<long long> counts_N;
    std::optional<std::vector<long long>> counts_M;
    std::optional<OrbLaurent> orb;
    std::optional<long long> orb0_signed; // omega * Orb(0)
    long long afl_lhs = 0;                // the integer derivative D
    std::optional<long long> unitary_selfdual;
    std::optional<long long> minuscule_closed;
    Verdicts verdicts;
};

// Full report for a symmetric pair: both count vectors, the Laurent
// polynomial, the matched model's checks, and (for n <= 2, when requested)
// the coset oracle comparison.
OrbitalReport report_for_pair(const SymmetricPair& pair, const Caps& caps = {},
                              bool with_oracle = true);

// Unitary-side-only report: N counts and the minuscule comparison. The
// derivative here is the N-form sum, exact on the odd side.
OrbitalReport report_for_model(const UnitaryModel& model, const Caps& caps = {});

} // namespace afl
