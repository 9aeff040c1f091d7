#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "afllab/lattice.hpp"
#include "afllab/matrix.hpp"
#include "afllab/rng.hpp"

namespace afl {

// Point of S_n(F) x M_n(F): zeta with zeta . conj(zeta) = I, y1 a column and
// y2 a row over F.
struct SymmetricPair {
    ArithContext ctx;
    std::size_t n = 0;
    EMatrix zeta;
    EMatrix y1; // n x 1, entries in F
    EMatrix y2; // 1 x n, entries in F

    void validate() const;
};

enum class Side { plus, minus };

struct InvariantRecord {
    std::vector<FieldElement> moments;   // c_0 .. c_{n-1}
    std::vector<FieldElement> char_poly; // monic, lowest degree first
    long long v = 0;                     // val det(y1 | zeta y1 | ...)
    FieldElement delta_value;            // det of the moment (Hankel) matrix
    long long delta = 0;                 // val of the above
    int omega = 1;                       // (-1)^v
    Side side = Side::plus;              // plus iff delta even
};

// Matched unitary-side orbit in the cyclic Gram model: operator C (companion
// of the characteristic polynomial) acting on E^n with cyclic vector x = e_0,
// hermitian form (v, w) = w^{c,T} G v, G[i][j] = c_{j-i}.
struct UnitaryModel {
    ArithContext ctx;
    std::size_t n = 0;
    EMatrix gram;
    EMatrix op;

    EMatrix x() const;
    long long delta() const; // val det gram
    void validate() const;   // all structural invariants, exact
};

bool is_regular_semisimple(const SymmetricPair& pair);
bool is_regular_semisimple(const UnitaryModel& model);

InvariantRecord invariants(const SymmetricPair& pair);

// Two-sided moment extension c_m for m in [lo, hi]: forwards by the
// characteristic-polynomial recursion, backwards by c_{-m} = conj(c_m).
// Raises InconsistentMoments when the recursion and conjugation rules
// disagree anywhere on the requested range.
std::map<long long, FieldElement> extend_moments(
    const ArithContext& ctx, const std::vector<FieldElement>& monic_char_poly,
    const std::vector<FieldElement>& moments, long long lo, long long hi);

UnitaryModel match_to_unitary(const SymmetricPair& pair);

// Matrix T of the semilinear involution tau(v) = T conj(v), the unique
// F-linear involution with tau(a xi^i x) = a^c xi^{-i} x.
EMatrix tau_map(const UnitaryModel& model);

bool is_minuscule(const UnitaryModel& model);

SymmetricPair orbit_act(const SymmetricPair& pair, const EMatrix& g);

struct SamplerLimits {
    int retry_cap = 10000;
};

SymmetricPair sample_symmetric(const ArithContext& ctx, std::size_t n,
                               std::uint64_t seed, long long val_budget,
                               const SamplerLimits& limits = {});

UnitaryModel sample_minuscule(const ArithContext& ctx, std::size_t n,
                              std::uint64_t seed, const SamplerLimits& limits = {});

// Random g in GL_n(F) with integral entries and bounded det valuation; used
// by orbit-invariance sweeps.
EMatrix sample_gl_f(const ArithContext& ctx, std::size_t n, std::uint64_t seed,
                    long long val_budget, const SamplerLimits& limits = {});

// The lattice L = O x + O xi x + ... in model coordinates (the standard
// lattice) and its hermitian dual.
Lattice model_lattice(const UnitaryModel& model);
Lattice model_dual_lattice(const UnitaryModel& model);

} // namespace afl
