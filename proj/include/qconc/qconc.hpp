#pragma once

#include <qconc/convex_envelope.hpp>
#include <qconc/error.hpp>
#include <qconc/isotropic.hpp>
#include <qconc/maps.hpp>
#include <qconc/qconcurrence.hpp>
#include <qconc/random.hpp>
#include <qconc/separability.hpp>
#include <qconc/state.hpp>
