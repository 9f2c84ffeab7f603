#pragma once

#include "padicell/error.hpp"
#include "padicell/exactla.hpp"
#include "padicell/padic.hpp"
#include "padicell/curve.hpp"
#include "padicell/charset.hpp"
#include "padicell/modsym.hpp"
#include "padicell/pseries.hpp"
#include "padicell/lpbuild.hpp"
#include "padicell/verify.hpp"
#include "padicell/basechange.hpp"
#include "padicell/serialize.hpp"
#include "padicell/cache.hpp"
