#pragma once

#include "lsseg/grid.hpp"
#include "lsseg/image.hpp"
#include "lsseg/schemes.hpp"
#include "lsseg/segmentation.hpp"
#include "lsseg/smoothness.hpp"
#include "lsseg/velocity.hpp"
