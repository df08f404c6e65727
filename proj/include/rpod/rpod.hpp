#ifndef RPOD_RPOD_HPP
#define RPOD_RPOD_HPP

#include "rpod/campaign.hpp"
#include "rpod/core.hpp"
#include "rpod/dynamics.hpp"
#include "rpod/frames.hpp"
#include "rpod/guidance.hpp"
#include "rpod/results.hpp"
#include "rpod/validate.hpp"

#endif // RPOD_RPOD_HPP
