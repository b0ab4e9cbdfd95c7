#pragma once

#include "semladder/core.hpp"
#include "semladder/embed.hpp"
#include "semladder/io.hpp"
#include "semladder/ladder.hpp"
#include "semladder/links.hpp"
#include "semladder/mappings.hpp"
#include "semladder/pipeline.hpp"
#include "semladder/records.hpp"
#include "semladder/rosetta.hpp"
#include "semladder/rules.hpp"
#include "semladder/store.hpp"
#include "semladder/vocabulary.hpp"
