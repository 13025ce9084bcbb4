#pragma once

#include "qhm/cli.hpp"
#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/family.hpp"
#include "qhm/genericity.hpp"
#include "qhm/hp.hpp"
#include "qhm/io.hpp"
#include "qhm/moduli.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"
#include "qhm/upsilon.hpp"
#include "qhm/verify.hpp"
