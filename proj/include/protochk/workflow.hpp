#pragma once

#include "protochk/model.hpp"

#include <string>
#include <vector>

namespace protochk {

/// Abstract workflow activity tree.
struct WfActivity {
    enum class Kind { Sequence, Receive, Send, IfElse, Listen, While, Terminate, Code };

    Kind kind = Kind::Sequence;
    std::string message;            // Receive, Send
    std::vector<std::string> sorts; // Receive, Send
    // Sequence: items. IfElse: branches. While: the body. Listen: one body
    // per event, parallel to `events`.
    std::vector<WfActivity> children;
    std::vector<Label> events;      // Listen: the event receptions
    std::vector<WfActivity> delay;  // Listen: zero or one timeout body

    static WfActivity sequence(std::vector<WfActivity> items);
    static WfActivity receive(std::string message, std::vector<std::string> sorts = {});
    static WfActivity send(std::string message, std::vector<std::string> sorts = {});
    static WfActivity if_else(std::vector<WfActivity> branches);
    static WfActivity listen(std::vector<std::pair<Label, WfActivity>> events,
                             std::vector<WfActivity> delay = {});
    static WfActivity while_loop(WfActivity body);
    static WfActivity terminate();
    static WfActivity code();

    friend bool operator==(const WfActivity&, const WfActivity&) = default;
};

struct Workflow {
    std::string name;
    WfActivity body;
};

class WorkflowError : public Error {
public:
    using Error::Error;
};

/// Builds the transition system of a workflow. Every activity is wired
/// from an entry state to an exit state; the top-level exit is final.
/// Throws WorkflowError for unreachable activities or malformed trees.
Sts translate(const WfActivity& activity, const std::string& name);

inline Sts translate(const Workflow& wf) { return translate(wf.body, wf.name); }

/// τ transitions the translation of `activity` produces.
std::size_t expected_tau_count(const WfActivity& activity);

} // namespace protochk
