// spinspace.cpp — exact enumeration of (J, m) blocks and ladder elements.

#include "dicke/spinspace.hpp"

#include <stdexcept>
#include <string>

namespace dicke {

namespace {

void check_pair(int n_qubits, int twice_j) {
    if (n_qubits < 1)
        throw std::domain_error("spinspace: need at least one qubit");
    if (twice_j < 0 || twice_j > n_qubits)
        throw std::domain_error("spinspace: J out of range for N = " +
                                std::to_string(n_qubits));
    if ((n_qubits - twice_j) % 2 != 0)
        throw std::domain_error("spinspace: J must differ from N/2 by an integer");
}

void check_member(int twice_j, int twice_m) {
    if (twice_j < 0)
        throw std::domain_error("spinspace: negative J");
    if (std::abs(twice_m) > twice_j || (twice_j - twice_m) % 2 != 0)
        throw std::domain_error("spinspace: m outside the J band");
}

}  // namespace

mpz_class degeneracy(int n_qubits, int twice_j) {
    check_pair(n_qubits, twice_j);
    // C(N, k) - C(N, k-1) with k = N/2 - J, computed cancellation-free as
    // C(N, k) * (2J+1) / (N-k+1); the division is exact.
    const unsigned long k = static_cast<unsigned long>((n_qubits - twice_j) / 2);
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n_qubits), k);
    mpz_class d = binom * (twice_j + 1);
    mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(),
                    static_cast<unsigned long>(n_qubits) - k + 1);
    return d;
}

DickeLedger enumerate_blocks(int n_qubits, int cap) {
    if (n_qubits < 1)
        throw std::domain_error("spinspace: need at least one qubit");
    if (n_qubits > cap)
        throw std::length_error("spinspace: qubit count " + std::to_string(n_qubits) +
                                " above cap " + std::to_string(cap));
    DickeLedger ledger;
    ledger.n_qubits = n_qubits;
    std::size_t offset = 0;
    for (int twice_j = n_qubits; twice_j >= (n_qubits % 2 == 0 ? 0 : 1); twice_j -= 2) {
        DickeBlock block;
        block.twice_j = twice_j;
        block.degeneracy = degeneracy(n_qubits, twice_j);
        block.twice_m.reserve(static_cast<std::size_t>(twice_j) + 1);
        for (int twice_m = -twice_j; twice_m <= twice_j; twice_m += 2)
            block.twice_m.push_back(twice_m);
        ledger.block_offset.push_back(offset);
        offset += block.twice_m.size();
        ledger.blocks.push_back(std::move(block));
    }
    return ledger;
}

std::size_t DickeLedger::size() const {
    if (blocks.empty()) return 0;
    return block_offset.back() + blocks.back().twice_m.size();
}

bool DickeLedger::has_block(int twice_j) const {
    return twice_j >= 0 && twice_j <= n_qubits && (n_qubits - twice_j) % 2 == 0;
}

std::size_t DickeLedger::block_index(int twice_j) const {
    if (!has_block(twice_j))
        throw std::domain_error("spinspace: no block with 2J = " + std::to_string(twice_j));
    return static_cast<std::size_t>((n_qubits - twice_j) / 2);
}

const DickeBlock& DickeLedger::block_of(int twice_j) const {
    return blocks[block_index(twice_j)];
}

std::size_t DickeLedger::index_of(int twice_j, int twice_m) const {
    const std::size_t b = block_index(twice_j);
    check_member(twice_j, twice_m);
    return block_offset[b] + static_cast<std::size_t>((twice_m + twice_j) / 2);
}

std::pair<int, int> DickeLedger::state_at(std::size_t idx) const {
    if (idx >= size())
        throw std::out_of_range("spinspace: flat index past the ledger end");
    std::size_t b = blocks.size() - 1;
    while (block_offset[b] > idx) --b;
    const DickeBlock& block = blocks[b];
    return {block.twice_j, block.twice_m[idx - block_offset[b]]};
}

double ladder_squared(int twice_j, int twice_m, Ladder dir) {
    check_member(twice_j, twice_m);
    const long long tj = twice_j, tm = twice_m;
    const long long num = dir == Ladder::raise ? (tj - tm) * (tj + tm + 2)
                                               : (tj + tm) * (tj - tm + 2);
    return static_cast<double>(num) / 4.0;
}

LadderElement ladder_element(int twice_j, int twice_m, Ladder dir) {
    const double amp = ladder_squared(twice_j, twice_m, dir);
    const int target = dir == Ladder::raise ? twice_m + 2 : twice_m - 2;
    return LadderElement{twice_j, target, amp};
}

}  // namespace dicke
