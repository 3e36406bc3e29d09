#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace protochk {

enum class Direction { Emission, Reception };

constexpr Direction complement(Direction d) noexcept
{
    return d == Direction::Emission ? Direction::Reception : Direction::Emission;
}

constexpr char direction_char(Direction d) noexcept { return d == Direction::Emission ? '!' : '?'; }

/// Message name reserved for the successful-termination observable.
inline constexpr std::string_view kTick = "√";

bool is_identifier(std::string_view s) noexcept;

/// τ, or an observable message with direction and ordered parameter sorts.
class Label {
public:
    Label() = default; // τ

    static Label tau() { return {}; }
    static Label emission(std::string message, std::vector<std::string> sorts = {});
    static Label reception(std::string message, std::vector<std::string> sorts = {});
    static Label observable(std::string message, Direction dir, std::vector<std::string> sorts = {});

    bool is_tau() const noexcept { return tau_; }
    bool is_observable() const noexcept { return !tau_; }
    bool is_emission() const noexcept { return !tau_ && dir_ == Direction::Emission; }
    bool is_reception() const noexcept { return !tau_ && dir_ == Direction::Reception; }

    const std::string& message() const noexcept { return message_; }
    Direction direction() const noexcept { return dir_; }
    const std::vector<std::string>& sorts() const noexcept { return sorts_; }

    Label reversed() const;
    Label stripped() const;

    /// `tau`, `a!`, `b?(Int,String)`.
    std::string to_string() const;

    friend bool operator==(const Label&, const Label&) = default;
    friend bool operator<(const Label& a, const Label& b);

private:
    bool tau_ = true;
    std::string message_;
    Direction dir_ = Direction::Emission;
    std::vector<std::string> sorts_;
};

using StateId = std::string;

struct Transition {
    StateId source;
    Label label;
    StateId target;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Unvalidated description of a transition system. An empty `states` list
/// means states are declared implicitly by use.
struct RawSts {
    std::string name;
    std::vector<StateId> states;
    StateId initial;
    std::vector<StateId> finals;
    std::vector<Transition> transitions;
};

enum class ViolationKind { UnknownState, FinalWithOutgoing, EmptyFinalSet, DuplicateState };

std::string_view to_string(ViolationKind k) noexcept;

struct Violation {
    ViolationKind kind;
    std::string detail;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }
    bool has(ViolationKind k) const noexcept;

private:
    std::vector<Violation> violations_;
};

class ReservedNameCollision : public Error {
public:
    using Error::Error;
};

/// Raised when an exploration exceeds its configured cap.
class StateExplosion : public Error {
public:
    StateExplosion(std::string what, std::size_t cap);
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

/// Validated symbolic transition system. States are indexed in
/// first-appearance order; transitions keep their input order.
class Sts {
public:
    struct Edge {
        std::size_t source;
        Label label;
        std::size_t target;
        friend bool operator==(const Edge&, const Edge&) = default;
    };

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<StateId>& states() const noexcept { return states_; }
    const StateId& state(std::size_t i) const { return states_.at(i); }
    std::optional<std::size_t> index_of(std::string_view id) const;

    std::size_t initial() const noexcept { return initial_; }
    const StateId& initial_id() const { return states_[initial_]; }
    bool is_final(std::size_t i) const { return final_.at(i); }
    std::vector<std::size_t> finals() const;

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    /// Indices into edges() leaving state i, in input order.
    const std::vector<std::size_t>& outgoing(std::size_t i) const { return out_.at(i); }
    bool has_tau(std::size_t i) const;
    bool is_stable(std::size_t i) const { return !has_tau(i); }

    /// Distinct labels used on transitions (the alphabet), sorted.
    std::vector<Label> alphabet() const;
    bool uses_message(std::string_view message) const;

    RawSts to_raw() const;
    Sts renamed(std::string name) const;

    /// Same name, same state set, same initial and final sets, same
    /// transition list.
    friend bool operator==(const Sts& a, const Sts& b);

private:
    friend Sts validate(const RawSts& raw);

    std::string name_;
    std::vector<StateId> states_;
    std::size_t initial_ = 0;
    std::vector<bool> final_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_;
};

/// Throws ValidationError listing every violation found.
Sts validate(const RawSts& raw);

Sts reverse_directions(const Sts& sts);
Sts strip_parameters(const Sts& sts);

/// Adds a fresh sink reached by `√!` from every final state; the sink
/// becomes the only final state.
Sts annotate_finals(const Sts& sts);

/// Merges every state whose only outgoing transition is a τ to a different
/// state into that successor, until no such state remains. Parallel
/// transitions are kept, so a τ fan-out is never collapsed.
Sts tau_confluence_reduce(const Sts& sts);

} // namespace protochk
