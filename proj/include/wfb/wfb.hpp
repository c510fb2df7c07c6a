#pragma once

#include "core.hpp"
#include "grid.hpp"
#include "geometry.hpp"
#include "energies.hpp"
#include "spectral.hpp"
#include "free_boundary.hpp"
#include "reflection.hpp"
#include "gallery.hpp"
#include "io.hpp"
