#include "hybridcast/error.hpp"

#include <exception>

namespace hybridcast {

void rethrow_with_stage(const std::string& stage) {
    try {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(stage + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(stage + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(stage + ": " + e.what());
    }
}

}  // namespace hybridcast
