#pragma once

#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hunt {

/// Declarative state graph: every state appears as a key, mapped to the
/// complete set of transitions it is allowed to take. The whole graph is
/// enumerable without running any behavior, which is what makes it
/// checkable before the first tick.
struct StateGraph {
  std::string initial;
  std::map<std::string, std::vector<std::string>> successors;

  bool has_state(const std::string& name) const {
    return successors.count(name) != 0;
  }
  bool allows(const std::string& from, const std::string& to) const {
    const auto it = successors.find(from);
    if (it == successors.end()) return false;
    for (const std::string& s : it->second)
      if (s == to) return true;
    return false;
  }
};

struct GraphDefect {
  enum class Severity { error, warning };
  Severity severity;
  std::string message;
};

/// Static checks, run before execution: a usable graph names an existing
/// initial state and only declared successors. States that cannot be
/// reached from the initial state are flagged as warnings.
inline std::vector<GraphDefect> verify(const StateGraph& graph) {
  std::vector<GraphDefect> defects;
  if (graph.initial.empty() || !graph.has_state(graph.initial)) {
    defects.push_back({GraphDefect::Severity::error,
                       "missing initial state '" + graph.initial + "'"});
  }
  for (const auto& [state, succs] : graph.successors) {
    for (const std::string& s : succs) {
      if (!graph.has_state(s))
        defects.push_back({GraphDefect::Severity::error,
                           "unknown successor '" + s + "' of '" + state + "'"});
    }
  }
  if (graph.has_state(graph.initial)) {
    std::set<std::string> seen{graph.initial};
    std::deque<std::string> queue{graph.initial};
    while (!queue.empty()) {
      const std::string cur = queue.front();
      queue.pop_front();
      const auto it = graph.successors.find(cur);
      if (it == graph.successors.end()) continue;
      for (const std::string& s : it->second)
        if (graph.has_state(s) && seen.insert(s).second) queue.push_back(s);
    }
    for (const auto& [state, succs] : graph.successors)
      if (!seen.count(state))
        defects.push_back({GraphDefect::Severity::warning,
                           "unreachable state '" + state + "'"});
  }
  return defects;
}

inline bool has_errors(const std::vector<GraphDefect>& defects) {
  for (const GraphDefect& d : defects)
    if (d.severity == GraphDefect::Severity::error) return true;
  return false;
}

struct MonitorEvent {
  enum class Kind { entered, exited, transition, warning };

  double timestamp = 0.0;
  Kind kind = Kind::entered;
  std::string state;
  std::string detail;
};

inline const char* kind_name(MonitorEvent::Kind k) {
  switch (k) {
    case MonitorEvent::Kind::entered: return "entered";
    case MonitorEvent::Kind::exited: return "exited";
    case MonitorEvent::Kind::transition: return "transition";
    case MonitorEvent::Kind::warning: return "warning";
  }
  return "?";
}

inline std::string to_log_line(const MonitorEvent& e) {
  char head[64];
  std::snprintf(head, sizeof head, "t=%.3f", e.timestamp);
  return std::string(head) + " kind=" + kind_name(e.kind) + " state=" +
         e.state + " detail=" + e.detail;
}

/// Executes a verified StateGraph. Each state has a handler returning the
/// name of the state to be in next (itself to stay). Transition legality is
/// enforced at runtime as well: a handler answering with an undeclared
/// successor is a programming error and throws. Every entry, exit, and
/// transition lands in an ordered event buffer for an external consumer.
class FsmRunner {
 public:
  /// Ticks observe the time and produce the next state's name.
  using Handler = std::function<std::string(double now)>;

  explicit FsmRunner(StateGraph graph) : graph_(std::move(graph)) {
    const auto defects = verify(graph_);
    if (has_errors(defects)) {
      std::string what = "state graph rejected:";
      for (const GraphDefect& d : defects)
        if (d.severity == GraphDefect::Severity::error)
          what += " " + d.message + ";";
      throw std::logic_error(what);
    }
    for (const GraphDefect& d : defects)
      pending_warnings_.push_back(d.message);
  }

  const StateGraph& graph() const { return graph_; }
  const std::string& current() const { return current_; }
  bool started() const { return !current_.empty(); }

  void on(const std::string& state, Handler handler) {
    if (!graph_.has_state(state))
      throw std::logic_error("handler for unknown state '" + state + "'");
    handlers_[state] = std::move(handler);
  }

  void start(double now) {
    if (started()) throw std::logic_error("already started");
    for (const std::string& w : pending_warnings_)
      emit(now, MonitorEvent::Kind::warning, graph_.initial, w);
    current_ = graph_.initial;
    emit(now, MonitorEvent::Kind::entered, current_, "");
  }

  /// Run the current state's handler once and follow its answer.
  void tick(double now) {
    if (!started()) throw std::logic_error("tick before start");
    const auto it = handlers_.find(current_);
    if (it == handlers_.end() || !it->second) return;  // passive state
    const std::string next = it->second(now);
    if (next == current_) return;
    if (!graph_.allows(current_, next))
      throw std::logic_error("undeclared transition '" + current_ + "' -> '" +
                             next + "'");
    move_to(next, now, "");
  }

  /// Manual override (operator injection): bypasses successor declarations
  /// but still requires a state that exists in the graph.
  void force_state(const std::string& state, double now) {
    if (!started()) throw std::logic_error("force before start");
    if (!graph_.has_state(state))
      throw std::logic_error("forced to unknown state '" + state + "'");
    move_to(state, now, "forced");
  }

  /// Emit a warning event attributed to the current state.
  void warn(double now, const std::string& detail) {
    emit(now, MonitorEvent::Kind::warning, current_, detail);
  }

  /// Hand the buffered events over, oldest first.
  std::vector<MonitorEvent> drain_events() {
    std::vector<MonitorEvent> out;
    out.swap(events_);
    return out;
  }

 private:
  void move_to(const std::string& next, double now, const std::string& how) {
    emit(now, MonitorEvent::Kind::exited, current_, "");
    emit(now, MonitorEvent::Kind::transition, current_,
         how.empty() ? current_ + " -> " + next : how + ": " + current_ + " -> " + next);
    current_ = next;
    emit(now, MonitorEvent::Kind::entered, current_, "");
  }

  void emit(double now, MonitorEvent::Kind kind, const std::string& state,
            const std::string& detail) {
    events_.push_back({now, kind, state, detail});
  }

  StateGraph graph_;
  std::map<std::string, Handler> handlers_;
  std::vector<std::string> pending_warnings_;
  std::vector<MonitorEvent> events_;
  std::string current_;
};

}  // namespace hunt
