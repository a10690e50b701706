#ifndef RRR_ANGLES_HPP
#define RRR_ANGLES_HPP

#include <cmath>
#include <numbers>

namespace rrr {

template <typename Scalar>
inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

template <typename Scalar>
inline constexpr Scalar kTwoPi = Scalar(2) * std::numbers::pi_v<Scalar>;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) { return deg * kPi<Scalar> / Scalar(180); }

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) { return rad * Scalar(180) / kPi<Scalar>; }

// Maps an angle into (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar a)
{
    Scalar r = std::fmod(a, kTwoPi<Scalar>);
    if (r <= -kPi<Scalar>) r += kTwoPi<Scalar>;
    else if (r > kPi<Scalar>) r -= kTwoPi<Scalar>;
    return r;
}

// Maps an angle into [0, 2pi).
template <typename Scalar>
Scalar wrap_two_pi(Scalar a)
{
    Scalar r = std::fmod(a, kTwoPi<Scalar>);
    if (r < Scalar(0)) r += kTwoPi<Scalar>;
    if (r >= kTwoPi<Scalar>) r -= kTwoPi<Scalar>;
    return r;
}

// Signed shortest rotation taking `from` onto `to`, in (-pi, pi].
template <typename Scalar>
Scalar shortest_arc(Scalar from, Scalar to) { return normalize_angle(to - from); }

} // namespace rrr

#endif // RRR_ANGLES_HPP
