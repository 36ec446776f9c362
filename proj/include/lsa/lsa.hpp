#pragma once

#include "lsa/bandit.hpp"
#include "lsa/curves.hpp"
#include "lsa/dataset.hpp"
#include "lsa/error.hpp"
#include "lsa/harness.hpp"
#include "lsa/kmeans.hpp"
#include "lsa/learner.hpp"
#include "lsa/linear_aggregation.hpp"
#include "lsa/report.hpp"
#include "lsa/seed.hpp"
#include "lsa/stats.hpp"
#include "lsa/strategies.hpp"
#include "lsa/synthetic.hpp"
#include "lsa/transfer.hpp"
