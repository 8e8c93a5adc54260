#pragma once

#include "fuzdyn/chaos.hpp"
#include "fuzdyn/errors.hpp"
#include "fuzdyn/fuzzy.hpp"
#include "fuzdyn/gallery.hpp"
#include "fuzdyn/hyper.hpp"
#include "fuzdyn/io.hpp"
#include "fuzdyn/metrics.hpp"
#include "fuzdyn/numeric.hpp"
#include "fuzdyn/proxsens.hpp"
#include "fuzdyn/skorokhod.hpp"
#include "fuzdyn/spaces.hpp"
