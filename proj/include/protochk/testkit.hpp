#pragma once

#include "protochk/compat.hpp"
#include "protochk/equiv.hpp"
#include "protochk/format.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace protochk::testkit {

// ---------------------------------------------------------------------------
// Fixture corpus: one small document per scenario, each with
// the verdicts it must produce.

struct Expectation {
    enum class Check { Compat, Relation };
    enum class Transform { None, ReverseStrip };

    Check check = Check::Compat;
    CompatNotion notion = CompatNotion::DeadlockFree;
    RelationKind relation = RelationKind::Strong;
    std::string lhs;
    std::string rhs;
    Transform rhs_transform = Transform::None;
    bool expected = true;
    std::optional<ComplementDirection> direction;

    /// e.g. "DF(S1p,S2)", "weak(S1,rev(strip(S2)))".
    std::string describe() const;
};

struct Fixture {
    std::string id;   // "F1" ... "F11"
    std::string file; // "fig1.sts" ...
    std::string title;
    std::string source;
    StsDocument doc;
    std::vector<Expectation> expectations;

    const Sts& get(const std::string& name) const;
};

std::vector<Fixture> fixtures();
const Fixture& fixture(const std::string& id);

struct ExpectationResult {
    std::string fixture;
    Expectation expectation;
    Verdict verdict;
    bool passed = false;
};

Verdict evaluate(const Fixture& f, const Expectation& e);
std::vector<ExpectationResult> verify_fixtures();

// ---------------------------------------------------------------------------
// Random generation. Deterministic per seed.

struct GenConfig {
    std::size_t max_states = 6;
    std::size_t max_transitions = 10;
    std::size_t alphabet_size = 3;
    double tau_probability = 0.3;
    bool tau_acyclic = false;
    std::uint64_t seed = 0;
};

/// Every state is reachable from s0; τ edges only go to higher indices
/// when `tau_acyclic`.
Sts generate_sts(const GenConfig& cfg, const std::string& name = "G");

/// τ-free, deterministic, and every non-final state has a move; the
/// states without moves are exactly the finals.
Sts generate_deterministic_sts(const GenConfig& cfg, const std::string& name = "D");

bool has_tau_cycle(const Sts& sts);

// Equivalence-preserving mutations (weak and branching; the last two also
// strong).
Sts insert_sequential_tau(const Sts& sts, std::mt19937_64& rng);
Sts duplicate_state(const Sts& sts, std::mt19937_64& rng);
Sts rename_states(const Sts& sts, std::mt19937_64& rng);
Sts equivalence_preserving_mutation(const Sts& sts, std::mt19937_64& rng, int steps = 3);

/// Removes an emission from a state that keeps at least one other
/// emission, and adds a reception on a message outside `partner_emits`.
Sts subtype_mutation(const Sts& sts, const std::set<std::string>& partner_emits, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Naive oracles straight from the textbook definitions. Test-only.

class SizeLimit : public Error {
public:
    using Error::Error;
};

/// Greatest fixpoint over all state pairs. Applies the same √ annotation
/// defaults as the production checkers. Throws SizeLimit when
/// |a|·|b| > 10,000.
bool oracle_relation(const Sts& a, const Sts& b, RelationKind kind, const RelationOptions& opts = {});

/// Brute-force product enumeration and per-state evaluation.
bool oracle_compat(const Sts& a, const Sts& b, CompatNotion notion);

/// Replays a witness against the two inputs from their initial states.
/// Returns the reached pair of states, or nullopt when a step is invalid.
std::optional<std::pair<std::size_t, std::size_t>> replay(const Sts& left, const Sts& right,
                                                          const WitnessTrace& trace);

/// Isomorphism up to state renaming (brute force, small systems only).
bool isomorphic(const Sts& a, const Sts& b);

} // namespace protochk::testkit
