#pragma once

#include "covsemi/base.hpp"
#include "covsemi/equipped.hpp"
#include "covsemi/fpgroup.hpp"
#include "covsemi/oracle.hpp"
#include "covsemi/orbits.hpp"
#include "covsemi/perm.hpp"
#include "covsemi/tuples.hpp"
