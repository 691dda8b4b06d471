#pragma once

#include <stdexcept>
#include <string>

namespace dnlat {

// A precondition of one of the closed-form lemmas is violated (e.g. the
// dfAL absorbing-ball hypothesis R^2 < delta/(4 mu)).
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// A trajectory produced a non-finite state. The damped systems have global
// solutions, so this signals an integration/step-size failure, not physics.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time = 0.0;
};

// The adaptive stepper could not meet the tolerance above dt_min.
class StepUnderflowError : public std::runtime_error {
public:
    StepUnderflowError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time = 0.0;
};

// Config file problem, annotated with the offending line when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
          line(line_no) {}
    int line = 0;
};

} // namespace dnlat
