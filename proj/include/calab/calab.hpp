#pragma once

#include "calab/bundle.hpp"
#include "calab/dyadic.hpp"
#include "calab/errors.hpp"
#include "calab/families.hpp"
#include "calab/generators.hpp"
#include "calab/io.hpp"
#include "calab/lowerbound.hpp"
#include "calab/mechanisms.hpp"
#include "calab/rng.hpp"
#include "calab/suite.hpp"
#include "calab/valuation.hpp"
#include "calab/valuations.hpp"
#include "calab/welfare.hpp"
#include "calab/width_family.hpp"
