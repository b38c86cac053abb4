#pragma once

#include "jvmd/admm.hpp"
#include "jvmd/errors.hpp"
#include "jvmd/jvmd.hpp"
#include "jvmd/signal_lab.hpp"
#include "jvmd/spectral.hpp"
#include "jvmd/types.hpp"
#include "jvmd/vmd.hpp"
#include "jvmd/bench.hpp"
#include "jvmd/frame_io.hpp"
#include "jvmd/sei.hpp"
