#include "gstab/trajectory.hpp"

namespace gstab {

const char* to_string(FieldMode m) {
    switch (m) {
        case FieldMode::smooth: return "smooth";
        case FieldMode::plus: return "plus";
        case FieldMode::minus: return "minus";
        case FieldMode::sliding: return "sliding";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::crossing: return "crossing";
        case EventKind::sliding_entry: return "sliding_entry";
        case EventKind::sliding_exit: return "sliding_exit";
    }
    return "?";
}

const char* to_string(TerminalStatus s) {
    switch (s) {
        case TerminalStatus::horizon_reached: return "horizon_reached";
        case TerminalStatus::converged: return "converged";
        case TerminalStatus::diverged: return "diverged";
        case TerminalStatus::integrator_failure: return "integrator_failure";
    }
    return "?";
}

}  // namespace gstab
