#pragma once

#include "bicalc/core.hpp"
#include "bicalc/derivative.hpp"
#include "bicalc/difference.hpp"
#include "bicalc/exprlang.hpp"
#include "bicalc/integral.hpp"
#include "bicalc/verify.hpp"
