#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace protochk {

enum class StepKind { Sync, TauLeft, TauRight };
enum class Side { Left, Right };

std::string_view to_string(StepKind k) noexcept; // "sync", "tau-left", "tau-right"

/// One product move, with state names resolved so the step can be printed
/// or replayed without the product.
struct WitnessStep {
    StepKind kind = StepKind::Sync;
    std::string message;            // Sync only
    std::vector<std::string> sorts; // Sync only
    Side emitter = Side::Left;      // Sync only
    std::pair<std::string, std::string> from;
    std::pair<std::string, std::string> to;

    friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

using WitnessTrace = std::vector<WitnessStep>;

enum class ComplementDirection { LeftComplementedByRight, RightComplementedByLeft, Both };

std::string_view to_string(ComplementDirection d) noexcept;

/// Why two systems are not related: a distinguishing observable trace, or
/// a pair of states where one side has a move the other cannot answer.
struct RelationWitness {
    std::vector<std::string> trace;
    std::optional<std::pair<std::string, std::string>> position;
    std::optional<Side> mover;
    std::string move;
    std::string explanation;
};

struct Verdict {
    bool holds = false;
    /// Relation a substitutability verdict was decided with, if any.
    std::string relation;
    std::optional<ComplementDirection> direction;
    std::optional<WitnessTrace> witness;
    std::optional<RelationWitness> relation_witness;
    /// Local condition violated at the end of the witness, when known.
    std::string violation;
    std::vector<std::string> warnings;
};

} // namespace protochk
