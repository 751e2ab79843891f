// engines.hpp — steady-state engines: closed-form fixed-J block, classical
// rate equation over (J, m), and an exact density-matrix oracle for small N.
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dicke/spinspace.hpp"
#include "dicke/thermo.hpp"

namespace dicke {

enum class EngineKind { analytic, rate_equation, full_oracle };

struct StateLabel {
    int twice_j{0};
    int twice_m{0};
};

struct SteadyDistribution {
    std::vector<StateLabel> states;  // parallel to p
    Eigen::VectorXd p;
    double residual{0.0};
    EngineKind engine{EngineKind::analytic};
    int n_qubits{0};          // 0 for a bare block with no qubit count attached
    bool three_bath{false};   // solved with a parasitic channel present
    std::shared_ptr<const DickeLedger> ledger;  // set on full-ledger solves
    std::vector<std::string> warnings;
};

struct InitialBlockWeights {
    std::map<int, double> weight;  // twice_j -> P_J, nonnegative, sums to 1

    static InitialBlockWeights top_block(int n_qubits);
    static InitialBlockWeights degeneracy_weighted(const DickeLedger& ledger);
    void validate(const DickeLedger& ledger) const;
};

// Classical generator over the (J, m) populations. Columns sum to zero;
// off-diagonals are transition rates in rad/s.
struct RateGenerator {
    std::shared_ptr<const DickeLedger> ledger;
    Eigen::SparseMatrix<double> w;

    // per-channel scalar rates, rad/s
    double hot_down{0.0}, hot_up{0.0};
    double cold_down{0.0}, cold_up{0.0};
    double local_down{0.0}, local_up{0.0};
    bool has_parasitic{false};

    struct ChannelTag {
        BathRole role{BathRole::hot};
        bool emission{true};
        double rate{0.0};
    };
    // Breaks one off-diagonal entry into its contributing channels.
    std::vector<ChannelTag> classify(std::size_t row, std::size_t col) const;
};

RateGenerator build_generator(std::shared_ptr<const DickeLedger> ledger,
                              const BathSpec& hot, const BathSpec& cold,
                              const std::optional<BathSpec>& parasitic,
                              const NaturalUnits& units);

// Steady state of the rate generator. Without a parasitic channel every J
// block conserves its weight, so initial weights are required; with one the
// kernel is unique and any provided weights are ignored (with a warning).
SteadyDistribution solve_steady(const RateGenerator& gen,
                                const std::optional<InitialBlockWeights>& init = {});

// Thermal fixed point of a single J block at the two-bath effective
// temperature. twice_jbar = 2*Jbar; states carry n_qubits = 0.
SteadyDistribution analytic_fixed_subspace(int twice_jbar, const BathSpec& hot,
                                           const BathSpec& cold,
                                           const NaturalUnits& units);

// Same closed form extended to a block mixture with fixed weights.
SteadyDistribution analytic_block_mixture(std::shared_ptr<const DickeLedger> ledger,
                                          const InitialBlockWeights& init,
                                          const BathSpec& hot, const BathSpec& cold,
                                          const NaturalUnits& units);

// Exact steady state of the full 2^N master equation, projected back onto
// (J, m) populations. Deliberately capped at N = 6.
inline constexpr int oracle_qubit_cap = 6;

SteadyDistribution full_space_oracle(int n_qubits, const BathSpec& hot,
                                     const BathSpec& cold,
                                     const std::optional<BathSpec>& parasitic,
                                     const NaturalUnits& units,
                                     const std::optional<InitialBlockWeights>& init = {});

}  // namespace dicke
