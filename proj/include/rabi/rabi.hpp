#pragma once

#include "rabi/errors.hpp"
#include "rabi/fockspace.hpp"
#include "rabi/io.hpp"
#include "rabi/model.hpp"
#include "rabi/numerics/eigh.hpp"
#include "rabi/numerics/laguerre.hpp"
#include "rabi/numerics/root_finding.hpp"
#include "rabi/numerics/symmetric_matrix.hpp"
#include "rabi/oracle.hpp"
#include "rabi/parallel.hpp"
#include "rabi/reservoir.hpp"
#include "rabi/resonance.hpp"
#include "rabi/version.hpp"
