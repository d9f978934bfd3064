#pragma once

#include "gkt/adversary.hpp"
#include "gkt/codec.hpp"
#include "gkt/error.hpp"
#include "gkt/group_math.hpp"
#include "gkt/harness.hpp"
#include "gkt/param_sets.hpp"
#include "gkt/pki.hpp"
#include "gkt/protocol.hpp"
