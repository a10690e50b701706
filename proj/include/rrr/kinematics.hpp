#ifndef RRR_KINEMATICS_HPP
#define RRR_KINEMATICS_HPP

#include "rrr/angles.hpp"
#include "rrr/errors.hpp"
#include "rrr/forward_kinematics.hpp"
#include "rrr/geometry.hpp"
#include "rrr/inverse_kinematics.hpp"
#include "rrr/jacobian.hpp"
#include "rrr/working_mode.hpp"

#endif // RRR_KINEMATICS_HPP
