// spinspace.hpp — collective spin space of N identical qubits: angular
// momentum blocks (J, m), their multiplicities, and ladder matrix elements.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

namespace dicke {

// Half-integer quantum numbers are carried as twice their value (twice_j =
// 2J, twice_m = 2m) so that block bookkeeping never touches floating point.

struct DickeBlock {
    int twice_j{0};
    mpz_class degeneracy{};    // number of copies of this J in the N-qubit space
    std::vector<int> twice_m;  // ascending, -2J .. +2J in steps of 2
};

struct DickeLedger {
    int n_qubits{0};
    std::vector<DickeBlock> blocks;          // descending J, largest first
    std::vector<std::size_t> block_offset;   // flat index of each block's lowest m

    std::size_t size() const;  // total number of (J, m) pairs
    std::size_t index_of(int twice_j, int twice_m) const;
    std::pair<int, int> state_at(std::size_t idx) const;  // (twice_j, twice_m)
    const DickeBlock& block_of(int twice_j) const;
    bool has_block(int twice_j) const;
    std::size_t block_index(int twice_j) const;
};

inline constexpr int default_qubit_cap = 4096;

// J runs down from N/2 in integer steps, ending at 0 (even N) or 1/2 (odd N).
DickeLedger enumerate_blocks(int n_qubits, int cap = default_qubit_cap);

// d(N, J): exact count of J blocks in the N-qubit product space.
mpz_class degeneracy(int n_qubits, int twice_j);

enum class Ladder { lower, raise };

struct LadderElement {
    int twice_j{0};
    int twice_m{0};              // target m after the step
    double squared_amplitude{0.0};
};

// |<J, m±1| J_± |J, m>|² = J(J+1) - m(m±1); zero at the band edge.
double ladder_squared(int twice_j, int twice_m, Ladder dir);
LadderElement ladder_element(int twice_j, int twice_m, Ladder dir);

}  // namespace dicke
