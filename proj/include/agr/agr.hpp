#pragma once

#include "agr/asymptotics.hpp"
#include "agr/calculus.hpp"
#include "agr/empirics.hpp"
#include "agr/errors.hpp"
#include "agr/expr.hpp"
#include "agr/field.hpp"
#include "agr/granularity.hpp"
#include "agr/npoly.hpp"
#include "agr/reductions.hpp"
#include "agr/serialize.hpp"
#include "agr/solvers.hpp"
