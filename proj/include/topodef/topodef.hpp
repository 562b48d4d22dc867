#ifndef TOPODEF_TOPODEF_HPP
#define TOPODEF_TOPODEF_HPP

#include "topodef/errors.hpp"
#include "topodef/grid.hpp"
#include "topodef/rotations.hpp"
#include "topodef/fields.hpp"
#include "topodef/report.hpp"
#include "topodef/charges.hpp"
#include "topodef/defects.hpp"
#include "topodef/monopole.hpp"
#include "topodef/solitons.hpp"
#include "topodef/homotopy.hpp"

#endif
