#pragma once

#include "hcperm/atsp.hpp"
#include "hcperm/classic.hpp"
#include "hcperm/core.hpp"
#include "hcperm/generate.hpp"
#include "hcperm/modular.hpp"
#include "hcperm/oracle.hpp"
#include "hcperm/ring.hpp"
#include "hcperm/selfreduce.hpp"
#include "hcperm/tabulate.hpp"
#include "hcperm/truncated_poly.hpp"
#include "hcperm/zp.hpp"
