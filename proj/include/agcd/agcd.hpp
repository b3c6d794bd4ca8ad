#pragma once

#include "agcd/control.hpp"
#include "agcd/errors.hpp"
#include "agcd/io.hpp"
#include "agcd/log.hpp"
#include "agcd/matpoly.hpp"
#include "agcd/numkernel.hpp"
#include "agcd/odegcd.hpp"
#include "agcd/subspace.hpp"
#include "agcd/sweep.hpp"
#include "agcd/sylvester.hpp"
