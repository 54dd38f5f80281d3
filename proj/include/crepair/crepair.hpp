#pragma once

#include "crepair/constant.hpp"
#include "crepair/fd_core.hpp"
#include "crepair/gadgets.hpp"
#include "crepair/io.hpp"
#include "crepair/matching.hpp"
#include "crepair/oracle.hpp"
#include "crepair/reduction.hpp"
#include "crepair/repair.hpp"
#include "crepair/simplify.hpp"
