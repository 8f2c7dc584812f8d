#pragma once

#include "symbolic.hpp"
#include "maps.hpp"
#include "kneading.hpp"
#include "renorm.hpp"
#include "rotation.hpp"
#include "measure.hpp"
#include "nonsymmetric.hpp"
#include "templates.hpp"
#include "flow.hpp"
