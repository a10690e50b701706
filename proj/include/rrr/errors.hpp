#ifndef RRR_ERRORS_HPP
#define RRR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rrr {

enum class KinematicErrorKind {
    Unreachable,
    OnSerialBoundary,
    SerialSingular,
    ParallelSingular,
    DegenerateLinearSystem,
    ModeMismatch,
    UnreachableSample,
};

// Raised by the kinematic layers (IK/FK/Jacobians/trajectories). `leg` is
// 1-based when the failure concerns one leg, 0 otherwise. `parameter` carries
// a path parameter or an angle when relevant.
class KinematicError : public std::runtime_error {
public:
    KinematicError(KinematicErrorKind kind, const std::string& what, int leg = 0,
                   double parameter = 0.0)
        : std::runtime_error(what), kind_(kind), leg_(leg), parameter_(parameter) {}

    KinematicErrorKind kind() const noexcept { return kind_; }
    int leg() const noexcept { return leg_; }
    double parameter() const noexcept { return parameter_; }

private:
    KinematicErrorKind kind_;
    int leg_;
    double parameter_;
};

// Invalid user-facing input: bad geometry, malformed config, mismatched boxes.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OutOfBox : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

} // namespace rrr

#endif // RRR_ERRORS_HPP
