// Structural model specifications and the two model generators: expansion of
// a structural spec into a full multi-regime model (targets are read by
// their children through a received-value switch: intention while the
// indicator is idle, the set value otherwise), and an unconstrained random
// generator used as counterexample-search fuel.
#pragma once

#include <cstdint>
#include <vector>

#include "eciv/model.hpp"

namespace eciv {

// Variables are listed in topological order; parents index earlier
// variables only. cpt[i] holds one distribution over variables[i].domain per
// parent configuration, rows enumerated row-major over the parents' domains.
// The emitted model contains the intention (natural-value) variables; the
// received values exist only inside the mechanism.
//
// read_intention[i][k], when set, makes variable i read parent k's intention
// value directly, bypassing the received-value switch. The default (all
// false) is the plain switch mechanism.
struct StructuralSpec {
    std::vector<VariableDecl> variables;
    std::vector<std::string> targets;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<double>> cpt;
    std::vector<std::vector<bool>> read_intention;  // optional; empty = all false

    bool reads_intention(std::size_t var, std::size_t parent_slot) const {
        return var < read_intention.size() && parent_slot < read_intention[var].size() &&
               read_intention[var][parent_slot];
    }
};

std::vector<Diagnostic> validate_spec(const StructuralSpec& spec);

// Expands a spec into one regime per product assignment of the targets'
// indicator states. Output is distributionally consistent by construction.
// Throws Error when the spec is invalid.
MultiRegimeModel generate_structural_model(const StructuralSpec& spec);

struct StructuralShape {
    int num_vars = 4;
    int num_targets = 2;
    int max_domain = 2;       // domain sizes drawn from [2, max_domain]
    double edge_prob = 0.5;   // probability of each possible predecessor edge
};

// Deterministic in (shape, seed). Variables are named V1..Vn.
StructuralSpec random_structural_spec(const StructuralShape& shape, std::uint64_t seed);

// All product assignments of {idle} + domain per target.
std::vector<RegimeAssignment> full_product_regimes(const std::vector<VariableDecl>& variables,
                                                   const std::vector<std::string>& targets);

// Independent random table per listed regime; no consistency guarantee.
// regime_subset must contain the all-idle regime (throws Error otherwise).
// Deterministic in seed.
MultiRegimeModel generate_random_model(const std::vector<VariableDecl>& variables,
                                       const std::vector<std::string>& targets,
                                       const std::vector<RegimeAssignment>& regime_subset,
                                       std::uint64_t seed);

}  // namespace eciv
