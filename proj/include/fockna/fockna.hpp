// Umbrella header.
#pragma once

#include "fockna/gallery.hpp"
#include "fockna/io.hpp"
#include "fockna/kernel.hpp"
#include "fockna/linalg.hpp"
#include "fockna/symbol.hpp"
#include "fockna/truncation.hpp"
#include "fockna/types.hpp"
