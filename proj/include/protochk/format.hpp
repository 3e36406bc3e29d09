#pragma once

#include "protochk/model.hpp"
#include "protochk/product.hpp"
#include "protochk/workflow.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace protochk {

struct StsDocument {
    std::vector<Sts> systems;

    const Sts* find(std::string_view name) const;
    friend bool operator==(const StsDocument&, const StsDocument&) = default;
};

class ParseError : public Error {
public:
    enum class Kind { Syntax, Validation, DuplicateName, EmptyListen, EmptyIfElse, Unsupported };

    ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message,
               std::vector<Violation> violations = {});

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
    std::vector<Violation> violations_;
};

StsDocument parse_sts(std::string_view text);
std::string print_sts(const StsDocument& doc);
std::string print_sts(const Sts& sts);

/// Aldebaran encoding of a label: `i` for τ, otherwise name, direction and
/// comma-joined sorts (`a!Int,String`).
std::string aut_label(const Label& label);
std::string export_aut(const Sts& sts);
/// Sync steps are written as the bare message name, τ steps as `i`.
std::string export_aut(const ProductLts& product);

Workflow parse_workflow(std::string_view text);

} // namespace protochk
