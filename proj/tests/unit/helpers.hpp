#pragma once

#include "wsim/population/population.hpp"

#include <vector>

namespace wsim::test {

inline Person adult(std::int64_t id, std::int64_t hh, int age = 40) {
    Person p;
    p.id = id;
    p.household_id = hh;
    p.age = age;
    return p;
}

inline Person employee(std::int64_t id, std::int64_t hh, double gross, double net) {
    Person p = adult(id, hh);
    p.labour_state = LabourState::employee;
    p.industry = 3;
    p.occupation = 2;
    p.gross_earnings = gross;
    p.prev_gross_earnings = gross;
    p.prev_net_earnings = net;
    p.commute_mode = CommuteMode::car;
    return p;
}

inline Household household(std::int64_t id, std::vector<std::int64_t> members, double housing = 0.0) {
    Household h;
    h.id = id;
    h.member_ids = std::move(members);
    h.housing_cost = housing;
    return h;
}

} // namespace wsim::test
