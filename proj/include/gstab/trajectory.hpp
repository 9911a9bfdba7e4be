#pragma once

#include "gstab/system.hpp"

#include <vector>

namespace gstab {

enum class FieldMode { smooth, plus, minus, sliding };

enum class EventKind { crossing, sliding_entry, sliding_exit };

enum class TerminalStatus { horizon_reached, converged, diverged, integrator_failure };

const char* to_string(FieldMode m);
const char* to_string(EventKind k);
const char* to_string(TerminalStatus s);

struct TrajectoryEvent {
    double time = 0.0;
    EventKind kind = EventKind::crossing;
    Vec location;
};

struct Sample {
    double t = 0.0;
    Vec x;
    FieldMode mode = FieldMode::smooth;
};

/// Time-stamped solution samples plus the surface-event log.
struct Trajectory {
    std::vector<Sample> samples;
    std::vector<TrajectoryEvent> events;
    TerminalStatus terminal_status = TerminalStatus::horizon_reached;

    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }
    double duration() const {
        return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
    }
};

}  // namespace gstab
