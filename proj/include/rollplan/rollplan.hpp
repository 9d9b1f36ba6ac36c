#ifndef ROLLPLAN_ROLLPLAN_HPP
#define ROLLPLAN_ROLLPLAN_HPP

#include "rollplan/angles.hpp"
#include "rollplan/controller.hpp"
#include "rollplan/errors.hpp"
#include "rollplan/geometry.hpp"
#include "rollplan/integrator.hpp"
#include "rollplan/kinematics.hpp"
#include "rollplan/planner.hpp"
#include "rollplan/reachability.hpp"
#include "rollplan/retime.hpp"
#include "rollplan/timescale.hpp"

#endif // ROLLPLAN_ROLLPLAN_HPP
