#pragma once

#include <string>

#include "pathmarket/instance_io.hpp"
#include "pathmarket/model.hpp"
#include "pathmarket/rational.hpp"

namespace pm_test {

inline pm::Instance from_json(const std::string& text) { return pm::parse_instance(text); }

// Appends a fresh buyer with a single certain job over the given bundle.
inline void append_deterministic_buyer(pm::Instance& inst, pm::Bundle bundle, double value) {
  pm::Job job;
  job.id = inst.job_count();
  job.buyer = inst.buyer_count();
  job.scenario = 0;
  job.bundle = std::move(bundle);
  job.value = value;
  job.value_exact = pm::Rat::from_double(value);
  pm::Scenario sc;
  sc.prob = 1.0;
  sc.prob_exact = pm::Rat(1);
  sc.jobs = {job.id};
  pm::Buyer buyer;
  buyer.scenarios = {sc};
  inst.jobs.push_back(job);
  inst.buyers.push_back(buyer);
}

// Realization where every buyer draws its first scenario.
inline pm::Realization all_first_scenarios(const pm::Instance& inst) {
  pm::Realization real;
  real.scenario.assign(inst.buyer_count(), 0);
  return real;
}

}  // namespace pm_test
