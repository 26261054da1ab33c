#include "evaluate.hpp"

#include <algorithm>

#include "pointer.hpp"
#include "schemes.hpp"

namespace qwork {

namespace {

PointerConfig pointer_config(const Scenario& s, const SchemeOptions& options) {
  if (!options.coupling && !options.spread) return weak_regime(s);
  return PointerConfig::covering(s, options.coupling.value_or(1.0), options.spread.value_or(1.0));
}

}  // namespace

WorkDistribution evaluate(SchemeId scheme, const Scenario& s, const SchemeOptions& options) {
  switch (scheme) {
    case SchemeId::TPM:
      return tpm(s).distribution;
    case SchemeId::OperatorOfWork:
      return work_operator(s).distribution;
    case SchemeId::FCS:
      return fcs_quasiprob(s);
    case SchemeId::MargenauHill:
      return margenau_hill(s).distribution;
    case SchemeId::ConsistentHistories:
      return consistent_histories(s, options.ch_steps);
    case SchemeId::StateDependent:
      return state_dependent(s);
    case SchemeId::SubEnsemble: {
      if (!options.decomposition_seed) return sub_ensemble(s, PureDecomposition::eigen(s.rho()));
      Rng rng(*options.decomposition_seed);
      const auto n = std::max(s.dim(), options.decomposition_states);
      return sub_ensemble(s, PureDecomposition::random(s.rho(), n, rng));
    }
    case SchemeId::CollectiveTwoCopy:
      return collective_two_copy(s, options.lambda).distribution;
    case SchemeId::GaussianPointer:
      return gaussian_pointer_distribution(s, pointer_config(s, options));
    case SchemeId::PostSelection:
      return post_selection(s, pointer_config(s, options));
  }
  return tpm(s).distribution;
}

}  // namespace qwork
