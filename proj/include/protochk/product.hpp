#pragma once

#include "protochk/model.hpp"
#include "protochk/verdict.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace protochk {

/// True iff one label is an emission and the other a reception of the same
/// message with identical sort lists. τ never synchronises.
bool complementary(const Label& a, const Label& b) noexcept;

struct ProductState {
    std::size_t left;
    std::size_t right;
    friend auto operator<=>(const ProductState&, const ProductState&) = default;
};

struct ProductStep {
    StepKind kind;
    /// Sync: the emitted label. TauLeft/TauRight: τ.
    Label label;
    Side emitter = Side::Left;
    std::size_t from; // index into ProductLts::states()
    std::size_t to;
};

struct ProductOptions {
    std::size_t max_states = 1'000'000;
};

/// Reachable part of the synchronous product of two systems. States are
/// numbered in breadth-first discovery order; state 0 is initial. The
/// outgoing steps of every state are sorted Sync < TauLeft < TauRight, then
/// by label, so the discovery tree yields canonical shortest paths.
class ProductLts {
public:
    const Sts& left() const noexcept { return left_; }
    const Sts& right() const noexcept { return right_; }

    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<ProductState>& states() const noexcept { return states_; }
    const ProductState& state(std::size_t i) const { return states_.at(i); }
    std::optional<std::size_t> index_of(ProductState s) const;
    std::size_t initial() const noexcept { return 0; }
    bool is_final(std::size_t i) const;

    const std::vector<ProductStep>& steps() const noexcept { return steps_; }
    const std::vector<std::size_t>& outgoing(std::size_t i) const { return out_.at(i); }

    /// Reachable non-final states without outgoing steps, in discovery order.
    const std::vector<std::size_t>& deadlocks() const noexcept { return deadlocks_; }
    const std::vector<std::string>& divergence_warnings() const noexcept { return divergence_; }

    /// Step indices of the canonical shortest path from the initial state.
    std::vector<std::size_t> path_to(std::size_t state) const;
    WitnessTrace witness_to(std::size_t state) const;
    WitnessStep describe(const ProductStep& step) const;
    std::pair<std::string, std::string> names(std::size_t state) const;

    /// The product as a transition system: Sync steps become emissions of
    /// the synchronised message, τ steps stay τ. Fails validation when no
    /// final product state is reachable.
    Sts to_sts(const std::string& name) const;

private:
    friend ProductLts synchronous_product(const Sts&, const Sts&, ProductOptions);

    Sts left_;
    Sts right_;
    std::vector<ProductState> states_;
    std::vector<ProductStep> steps_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::optional<std::size_t>> parent_;
    std::vector<std::size_t> deadlocks_;
    std::vector<std::string> divergence_;
};

/// Throws StateExplosion past `options.max_states`.
ProductLts synchronous_product(const Sts& left, const Sts& right, ProductOptions options = {});

struct Deadlock {
    ProductState state;
    WitnessTrace witness;
};

std::vector<Deadlock> find_deadlocks(const ProductLts& product);

/// States of `sts` lying on a τ-cycle.
std::vector<bool> tau_cycle_states(const Sts& sts);

} // namespace protochk
