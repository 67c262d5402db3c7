// Seeded synthetic composition instances for experiments and verification.

#pragma once

#include <cstdint>

#include "qoscompose/model.hpp"

namespace qosc {

/// Shape of a generated instance. Services are arranged in tiers: every
/// data name is produced inside exactly one tier and consumed only by
/// strictly later tiers, so instances are acyclic by construction and every
/// service activates from the query inputs. Several services in a tier
/// share output names, which keeps provider choice non-trivial.
struct SyntheticSpec {
    std::uint64_t seed = 1;
    std::size_t services = 100;
    std::size_t tiers = 5;           // at least 1
    std::size_t names_per_tier = 6;  // data-name pool per tier
    std::size_t max_inputs = 3;      // per service
    std::size_t max_outputs = 2;     // per service, beyond the forced one
    std::size_t max_offers = 2;      // QoS tuples per service
    std::size_t param_count = 4;     // first n of the standard presets
    double local_prob = 0.0;         // chance of one local constraint
    double global_prob = 0.0;        // chance of one global constraint
};

struct SyntheticInstance {
    Repository repo;
    Query query;
};

/// Generates a repository and a matching query, deterministically under
/// the seed. The query provides the tier-0 names and asks for a sample of
/// the last tier's names; without constraints it is always solvable.
/// Constraint directions always align with parameter directions.
SyntheticInstance gen_instance(const SyntheticSpec& spec);

}  // namespace qosc
