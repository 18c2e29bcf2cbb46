#pragma once

#include <string>
#include <vector>

#include "cms/canonical.hpp"
#include "cms/extremal.hpp"
#include "cms/recurrence.hpp"
#include "cms/weight.hpp"

namespace cms {

// Shortest-faithful decimal for a double: %.17g, bit-exact through strtod.
std::string fmt17(double v);

// Weight spec file: JSON object with keys breakpoints, pieces, m, M, regularity.
// Written deterministically (fixed key order, 17 significant digits).
std::string weight_spec_to_text(const WeightSpec& spec);
WeightSpec weight_spec_from_text(const std::string& text);
void write_weight_spec(const WeightSpec& spec, const std::string& path);
WeightSpec read_weight_spec(const std::string& path);

// Profile CSV: header x,pi,pi_lower,lambda,pi_prime,w,excluded; pi_prime empty
// on excluded or failed rows; excluded is 0/1.
std::string profile_to_csv(const Profile& prof);
void write_profile_csv(const Profile& prof, const std::string& path);

// Canonical rep CSV: comment header carrying n, r and the parameter a encoded
// both directly and as (sign, 1/a) so the Lobatto limit round-trips; then rows
// node,weight,index.
std::string rep_to_csv(const CanonicalRep& rep);
void write_rep_csv(const CanonicalRep& rep, const std::string& path);
CanonicalRep rep_from_csv(const std::string& text);

// Recurrence CSV: comment header with the measure kind; rows k,alpha,beta,norm.
std::string recurrence_to_csv(const RecurrenceTable& table);
void write_recurrence_csv(const RecurrenceTable& table, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace cms
