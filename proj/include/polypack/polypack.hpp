#pragma once

#include "polypack/inversive.hpp"
#include "polypack/polyhedron.hpp"
#include "polypack/midsphere.hpp"
#include "polypack/packing.hpp"
#include "polypack/rootsys.hpp"
#include "polypack/titscone.hpp"
#include "polypack/areainv.hpp"
#include "polypack/io.hpp"
