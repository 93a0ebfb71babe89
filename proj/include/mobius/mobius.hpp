#pragma once

#include "mobius/errors.hpp"
#include "mobius/geometry.hpp"
#include "mobius/solver.hpp"
#include "mobius/objectives.hpp"
#include "mobius/predicates.hpp"
#include "mobius/accel.hpp"
#include "mobius/packing.hpp"
#include "mobius/pipeline/scene.hpp"
#include "mobius/pipeline/run.hpp"
#include "mobius/pipeline/mesh.hpp"
#include "mobius/pipeline/flatmap.hpp"
#include "mobius/pipeline/coin.hpp"
#include "mobius/pipeline/svg.hpp"
#include "mobius/pipeline/bundle.hpp"
