#include "disparity/engine.hpp"

#include "disparity/error.hpp"
#include "disparity/oaxaca.hpp"
#include "disparity/parametric.hpp"
#include "disparity/plugin.hpp"

namespace disparity {

DecompositionEstimate decompose(const Dataset& d, const AnalysisSpec& spec)
{
    spec.validate();
    if (spec.estimator == Estimator::Plugin) {
        return is_timedep(spec.proposition) ? plugin_mu_timedep(d, spec) : plugin_mu(d, spec);
    }
    if (spec.options.interactions) {
        if (spec.family == OutcomeFamily::RareBinary) {
            throw Error(ErrorKind::UnsupportedMode, "interaction models are available for CONTINUOUS outcomes only");
        }
        return proposition_via_oaxaca(d, spec);
    }
    if (spec.family == OutcomeFamily::RareBinary) return decompose_logistic_rare(d, spec);
    if (spec.estimator == Estimator::Product) return decompose_product_coefficients(d, spec);
    return spec.bindings.early.size() == 1 ? decompose_successive_linear(d, spec) : decompose_successive_multix(d, spec);
}

}  // namespace disparity
