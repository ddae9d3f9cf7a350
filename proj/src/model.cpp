#include "fpo/model.hpp"

namespace fpo {

namespace {

void require_admissible(const PhaseState& s, const MeanPair& m) {
  if (!(s.q2 > 0.0)) throw DomainError("q2 must be positive");
  if (!(s.q1 > s.q2)) throw DomainError("electron ordering q1 > q2 violated");
  if (!(m.m2 > 0.0)) throw DomainError("m2 must be positive");
  if (!(m.m1 > m.m2)) throw DomainError("mean ordering m1 > m2 violated");
}

}  // namespace

AccelPair vector_field(const PhaseState& s, const MeanPair& m, HomotopyParam r) {
  require_admissible(s, m);
  const double mg = m.gap();
  const double mean_term = r.value() / (mg * mg);
  const double gap = s.q1 - s.q2;
  const double inst_term = (1.0 - r.value()) / (gap * gap);
  return {-2.0 / (s.q1 * s.q1) + mean_term + inst_term,
          -2.0 / (s.q2 * s.q2) - mean_term - inst_term};
}

double energy(const PhaseState& s, const MeanPair& m, HomotopyParam r) {
  require_admissible(s, m);
  const double mg = m.gap();
  const double gap = s.q1 - s.q2;
  // The mean term enters with a minus sign: the mean interaction acts as a
  // constant force r/(m1-m2)^2 pushing the electrons apart, so its potential
  // is -r (q1-q2)/(m1-m2)^2. Only with this sign is E constant along the flow.
  return 0.5 * (s.v1 * s.v1 + s.v2 * s.v2) - 2.0 / s.q1 - 2.0 / s.q2 -
         r.value() * gap / (mg * mg) + (1.0 - r.value()) / gap;
}

double jerk1(const PhaseState& s, HomotopyParam r) {
  if (!(s.q1 > s.q2)) throw DomainError("electron ordering q1 > q2 violated");
  const double gap = s.q1 - s.q2;
  return 4.0 * s.v1 / (s.q1 * s.q1 * s.q1) -
         2.0 * (1.0 - r.value()) * (s.v1 - s.v2) / (gap * gap * gap);
}

}  // namespace fpo
