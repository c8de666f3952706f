#pragma once

#include "lexshift/calendar.hpp"
#include "lexshift/common.hpp"
#include "lexshift/config.hpp"
#include "lexshift/corpus.hpp"
#include "lexshift/corpus_io.hpp"
#include "lexshift/didreg.hpp"
#include "lexshift/embeddings.hpp"
#include "lexshift/gptscore.hpp"
#include "lexshift/gptscore_io.hpp"
#include "lexshift/io.hpp"
#include "lexshift/mcmc.hpp"
#include "lexshift/porter.hpp"
#include "lexshift/random.hpp"
#include "lexshift/simharness.hpp"
#include "lexshift/simplex_ls.hpp"
#include "lexshift/stats.hpp"
#include "lexshift/stopwords.hpp"
#include "lexshift/syncontrol.hpp"
#include "lexshift/text.hpp"
